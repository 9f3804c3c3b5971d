// Copyright 2026 The qmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmem/linalg.hpp"

#include <algorithm>
#include <array>

namespace qmem {

namespace {

// [6/6] Pade coefficients c_k = (12-k)! 6! / (12! k! (6-k)!).
constexpr std::array<double, 7> kPade6 = {
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
};

template <typename M>
M expm_impl(const M& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("expm: matrix must be square");
  if (!a.allFinite()) throw NumericOverflow("expm: non-finite input", 0.0);
  const Index n = a.rows();
  if (n == 0) return a;

  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
  }
  const M x = a / std::ldexp(1.0, squarings);

  const M id = M::Identity(n, n);
  M power = id;
  M num = kPade6[0] * id;
  M den = kPade6[0] * id;
  for (std::size_t k = 1; k < kPade6.size(); ++k) {
    power = power * x;
    num += kPade6[k] * power;
    den += ((k % 2 == 0) ? 1.0 : -1.0) * kPade6[k] * power;
  }
  M result = den.partialPivLu().solve(num);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace

Mat expm(const Mat& a) { return expm_impl(a); }
CMat expm(const CMat& a) { return expm_impl(a); }

ExpmIntegral expm_and_integral(const Mat& a, double duration) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("expm_and_integral: matrix must be square");
  }
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw InvalidArgument("expm_and_integral: duration must be finite and >= 0");
  }
  const Index n = a.rows();
  Mat block = Mat::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = duration * a;
  block.topRightCorner(n, n) = duration * Mat::Identity(n, n);
  const Mat e = expm(block);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, n)};
}

int grid_steps(double t0, double t1, double dt) {
  const double span = std::abs(t1 - t0);
  if (span == 0.0) return 0;
  // Absorb round-off so that, e.g., 1.0 / 5e-4 gives 2000 steps, not 2001.
  return std::max(1, static_cast<int>(std::ceil(span / dt - 1e-9)));
}

Mat propagate_linear(const std::function<Mat(double)>& a_of_t, const Mat& y0,
                     double t0, double t1, double dt) {
  return rk4_integrate(
      [&](double t, const Mat& y) -> Mat {
        const Mat a = a_of_t(t);
        if (a.rows() != y.rows() || a.cols() != y.rows()) {
          throw InvalidArgument("propagate_linear: A(t) shape mismatch");
        }
        return a * y;
      },
      y0, t0, t1, dt);
}

}  // namespace qmem
