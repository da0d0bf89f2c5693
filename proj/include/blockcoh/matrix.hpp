#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace blockcoh {

using cplx = std::complex<double>;

/// Scalar field a frame lives over. Storage is always complex; real frames
/// carry exactly-zero imaginary parts.
enum class Field { real, complex };

std::string_view to_string(Field f);
Field field_from_string(std::string_view s);

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }
  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  CMatrix adjoint() const;
  CMatrix columns(std::size_t first, std::size_t count) const;
  std::vector<cplx> column(std::size_t j) const;

  /// True when every imaginary part is exactly zero.
  bool is_real() const;
  bool all_finite() const;

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a);
CMatrix operator*(cplx s, const CMatrix& a);

/// Real when every entry has zero imaginary part.
Field field_of(const CMatrix& m);

/// Largest singular value. Gram sides of size <= 8 go straight to a cyclic
/// Jacobi eigensolver; larger ones use power iteration with a Jacobi fallback.
double spectral_norm(const CMatrix& m);

/// sqrt(sum |m_ij|^2).
double frobenius_norm(const CMatrix& m);

/// Largest |a_ij - b_ij|; shapes must agree.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

/// Standard Kronecker product, column (i, j) of the result is p_i (x) q_j.
CMatrix kronecker(const CMatrix& p, const CMatrix& q);

/// Orthonormal basis of the column space (modified Gram-Schmidt with one
/// reorthogonalisation pass). The first entry of each output column whose
/// modulus exceeds 1e-12 is rotated to be real and positive.
CMatrix orthonormalize(const CMatrix& m);

/// Q factor of the thin QR with positive real R diagonal, same process without
/// the phase rotation. A Gaussian input gives a Haar-distributed output.
CMatrix qr_orthonormal(const CMatrix& m);

/// Unitary p x p DFT, entries p^(-1/2) exp(2 pi i jk / p).
CMatrix dft_matrix(std::size_t p);

/// Unitary 2^k x 2^k Sylvester-Hadamard matrix (entries +-2^(-k/2)).
CMatrix hadamard_sylvester(unsigned k);

/// ||U* U - I||_F for a square or tall matrix.
double unitarity_defect(const CMatrix& u);

/// Eigenvalues of a Hermitian matrix, ascending (cyclic Jacobi).
std::vector<double> hermitian_eigenvalues(const CMatrix& h);

/// exp(2 pi i q / p) with exact values at the quarter turns.
cplx unit_root(long long q, long long p);

}  // namespace blockcoh
