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

#pragma once

// Dense third-order arrays and the three products used throughout:
//
//   dot   (arr . x)_{jk}   = sum_l arr_{jkl} x_l
//   diam  (arr <> u)       = [arr_1 u, ..., arr_s u]
//   star  (u * arr)_l      = <u, arr_l>   (Frobenius)

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qmem/error.hpp"

namespace qmem {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;
using Complex = std::complex<double>;

/// p x q x s array with entries v(j, k, l). Sections v_l = (v_{jkl})_{j,k}
/// slice the third index and are stored contiguously in column-major order.
/// first_slice(l) = (v_{ljk})_{j,k} slices the first index instead; the two
/// coincide only for totally antisymmetric (or symmetric) arrays.
template <typename Scalar>
class Array3 {
 public:
  using Section = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using SectionMap = Eigen::Map<Section>;
  using ConstSectionMap = Eigen::Map<const Section>;

  Array3() = default;
  Array3(Index p, Index q, Index s)
      : p_(p), q_(q), s_(s),
        data_(static_cast<std::size_t>(p * q * s), Scalar(0)) {
    if (p <= 0 || q <= 0 || s <= 0) {
      throw InvalidArgument("Array3: dimensions must be positive");
    }
  }

  Index rows() const { return p_; }
  Index cols() const { return q_; }
  Index sections() const { return s_; }

  Scalar& operator()(Index j, Index k, Index l) {
    return data_[static_cast<std::size_t>((l * q_ + k) * p_ + j)];
  }
  Scalar operator()(Index j, Index k, Index l) const {
    return data_[static_cast<std::size_t>((l * q_ + k) * p_ + j)];
  }

  ConstSectionMap section(Index l) const {
    return ConstSectionMap(data_.data() + l * p_ * q_, p_, q_);
  }
  SectionMap section(Index l) {
    return SectionMap(data_.data() + l * p_ * q_, p_, q_);
  }

  /// (v_{ljk})_{j,k}, a q x s matrix.
  Section first_slice(Index l) const {
    Section out(q_, s_);
    for (Index k = 0; k < s_; ++k) {
      for (Index j = 0; j < q_; ++j) out(j, k) = (*this)(l, j, k);
    }
    return out;
  }

  const std::vector<Scalar>& data() const { return data_; }

 private:
  Index p_ = 0;
  Index q_ = 0;
  Index s_ = 0;
  std::vector<Scalar> data_;
};

using RealArray3 = Array3<double>;
using ComplexArray3 = Array3<Complex>;

RealArray3 real_part(const ComplexArray3& arr);
RealArray3 imag_part(const ComplexArray3& arr);

/// Largest |beta_l - beta_l^*| entry over all sections.
double max_hermitian_defect(const ComplexArray3& arr);

/// sum_l x_l arr_l. Requires x.size() == arr.sections().
Mat dot(const RealArray3& arr, const Vec& x);
CMat dot(const ComplexArray3& arr, const Vec& x);

/// Matrix whose l-th column is arr_l u. Requires u.size() == arr.cols().
Mat diam(const RealArray3& arr, const Vec& u);

/// (<u, arr_l>)_l. Requires u to have the section shape.
Vec star(const Mat& u, const RealArray3& arr);

/// Block row [arr_1 ... arr_s] (p x qs).
Mat block_row(const RealArray3& arr);

/// Column-major vectorization.
Vec col(const Mat& m);

/// Frobenius inner product <a, b> = Tr(a^T b).
inline double frobenius(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("frobenius: shape mismatch");
  }
  return (a.array() * b.array()).sum();
}

}  // namespace qmem
