#pragma once

#include <Eigen/Dense>
#include <complex>

#include "blockcoh/matrix.hpp"
#include "blockcoh/rng.hpp"

namespace testutil {

using blockcoh::CMatrix;
using blockcoh::cplx;
using EMat = Eigen::MatrixXcd;

inline CMatrix random_matrix(std::size_t rows, std::size_t cols, blockcoh::CounterRng& rng,
                             bool real = false) {
  CMatrix m(rows, cols);
  for (auto& z : m.data()) z = cplx(rng.normal(), real ? 0.0 : rng.normal());
  return m;
}

inline CMatrix random_unit_columns(std::size_t rows, std::size_t cols, blockcoh::CounterRng& rng,
                                   bool real = false) {
  CMatrix m = random_matrix(rows, cols, rng, real);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += std::norm(m(i, j));
    for (std::size_t i = 0; i < rows; ++i) m(i, j) /= std::sqrt(s);
  }
  return m;
}

inline EMat to_eigen(const CMatrix& m) {
  EMat e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline CMatrix from_eigen(const EMat& e) {
  CMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

/// Unitary from the QR of a complex Gaussian, via Eigen.
inline CMatrix random_unitary(std::size_t n, blockcoh::CounterRng& rng) {
  Eigen::HouseholderQR<EMat> qr(to_eigen(random_matrix(n, n, rng)));
  return from_eigen(qr.householderQ() * EMat::Identity(n, n));
}

/// Largest singular value through Eigen's SVD.
inline double eigen_spectral_norm(const CMatrix& m) {
  Eigen::JacobiSVD<EMat> svd(to_eigen(m));
  return svd.singularValues()(0);
}

}  // namespace testutil
