#include "blockcoh/matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "blockcoh/detail/small_eig.hpp"
#include "blockcoh/errors.hpp"

namespace blockcoh {
namespace {

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    throw DimensionError("matrix dimensions overflow");
  return a * b;
}

void require_nonempty(const CMatrix& m, const char* op) {
  if (m.empty()) throw DimensionError(std::string(op) + ": empty matrix");
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(op) + ": shape mismatch");
}

// Split Hermitian Gram of the smaller side: M*M when cols <= rows, else MM*.
void small_side_gram(const CMatrix& m, std::vector<double>& re, std::vector<double>& im,
                     std::size_t& k) {
  const bool use_cols = m.cols() <= m.rows();
  k = use_cols ? m.cols() : m.rows();
  re.assign(k * k, 0.0);
  im.assign(k * k, 0.0);
  if (use_cols) {
    for (std::size_t t = 0; t < m.rows(); ++t) {
      const auto row = m.row(t);
      for (std::size_t a = 0; a < k; ++a) {
        const cplx ca = std::conj(row[a]);
        for (std::size_t b = a; b < k; ++b) {
          const cplx v = ca * row[b];
          re[a * k + b] += v.real();
          im[a * k + b] += v.imag();
        }
      }
    }
  } else {
    for (std::size_t a = 0; a < k; ++a) {
      const auto ra = m.row(a);
      for (std::size_t b = a; b < k; ++b) {
        const auto rb = m.row(b);
        cplx s = 0.0;
        for (std::size_t t = 0; t < m.cols(); ++t) s += ra[t] * std::conj(rb[t]);
        re[a * k + b] = s.real();
        im[a * k + b] = s.imag();
      }
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    im[a * k + a] = 0.0;
    for (std::size_t b = a + 1; b < k; ++b) {
      re[b * k + a] = re[a * k + b];
      im[b * k + a] = -im[a * k + b];
    }
  }
}

}  // namespace

std::string_view to_string(Field f) { return f == Field::real ? "real" : "complex"; }

Field field_from_string(std::string_view s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw DomainError("unknown field '" + std::string(s) + "' (expected real|complex)");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(checked_mul(rows, cols)) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != checked_mul(rows, cols))
    throw DimensionError("entry count does not match rows x cols");
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw DimensionError("column range out of bounds");
  CMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_ + first), count,
                out.data_.begin() + static_cast<std::ptrdiff_t>(i * count));
  return out;
}

std::vector<cplx> CMatrix::column(std::size_t j) const {
  if (j >= cols_) throw DimensionError("column index out of bounds");
  std::vector<cplx> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

bool CMatrix::is_real() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) { return z.imag() == 0.0; });
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t t = 0; t < a.cols(); ++t) {
      const cplx s = a(i, t);
      if (s == cplx{}) continue;
      const auto brow = b.row(t);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += s * brow[j];
    }
  }
  return out;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "matrix sum");
  CMatrix out = a;
  auto d = out.data();
  auto s = b.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
  return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "matrix difference");
  CMatrix out = a;
  auto d = out.data();
  auto s = b.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= s[i];
  return out;
}

CMatrix operator-(const CMatrix& a) {
  CMatrix out = a;
  for (auto& z : out.data()) z = -z;
  return out;
}

CMatrix operator*(cplx s, const CMatrix& a) {
  CMatrix out = a;
  for (auto& z : out.data()) z *= s;
  return out;
}

Field field_of(const CMatrix& m) { return m.is_real() ? Field::real : Field::complex; }

double spectral_norm(const CMatrix& m) {
  require_nonempty(m, "spectral_norm");
  std::vector<double> re, im;
  std::size_t k = 0;
  small_side_gram(m, re, im, k);
  const bool real = std::all_of(im.begin(), im.end(), [](double x) { return x == 0.0; });
  const double lambda = detail::hermitian_max_eigenvalue(
      re, real ? std::span<const double>{} : std::span<const double>(im), k);
  return std::sqrt(std::max(lambda, 0.0));
}

double frobenius_norm(const CMatrix& m) {
  require_nonempty(m, "frobenius_norm");
  double s = 0.0;
  for (const auto& z : m.data()) s += std::norm(z);
  return std::sqrt(s);
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

CMatrix kronecker(const CMatrix& p, const CMatrix& q) {
  require_nonempty(p, "kronecker");
  require_nonempty(q, "kronecker");
  const std::size_t rows = checked_mul(p.rows(), q.rows());
  const std::size_t cols = checked_mul(p.cols(), q.cols());
  checked_mul(rows, cols);
  CMatrix out(rows, cols);
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const cplx s = p(i, j);
      for (std::size_t a = 0; a < q.rows(); ++a)
        for (std::size_t b = 0; b < q.cols(); ++b)
          out(i * q.rows() + a, j * q.cols() + b) = s * q(a, b);
    }
  return out;
}

namespace {

CMatrix gram_schmidt(const CMatrix& m, bool phase_convention) {
  require_nonempty(m, "orthonormalize");
  if (m.cols() > m.rows())
    throw DimensionError("orthonormalize: more columns than rows");
  const std::size_t n = m.rows();
  const std::size_t r = m.cols();
  const bool real_input = m.is_real();
  // Columns are processed as contiguous vectors.
  std::vector<std::vector<cplx>> q(r);
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<cplx> v = m.column(j);
    double original = 0.0;
    for (const auto& z : v) original += std::norm(z);
    original = std::sqrt(original);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        cplx proj = 0.0;
        for (std::size_t t = 0; t < n; ++t) proj += std::conj(q[i][t]) * v[t];
        for (std::size_t t = 0; t < n; ++t) v[t] -= proj * q[i][t];
      }
    }
    double norm = 0.0;
    for (const auto& z : v) norm += std::norm(z);
    norm = std::sqrt(norm);
    if (!(norm >= 1e-12 * std::max(original, 1e-300)) || original == 0.0)
      throw DegenerateInputError("orthonormalize: column " + std::to_string(j) +
                                 " is numerically dependent");
    for (auto& z : v) z /= norm;
    // Phase convention: first entry of non-negligible modulus made real positive.
    for (std::size_t t = 0; phase_convention && t < n; ++t) {
      const double mod = std::abs(v[t]);
      if (mod > 1e-12) {
        const cplx phase = std::conj(v[t]) / mod;
        for (auto& w : v) w *= phase;
        v[t] = cplx(mod, 0.0);
        break;
      }
    }
    if (real_input)
      for (auto& z : v) z = cplx(z.real(), 0.0);
    q[j] = std::move(v);
  }
  CMatrix out(n, r);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t t = 0; t < n; ++t) out(t, j) = q[j][t];
  return out;
}

}  // namespace

CMatrix orthonormalize(const CMatrix& m) { return gram_schmidt(m, true); }

CMatrix qr_orthonormal(const CMatrix& m) { return gram_schmidt(m, false); }

cplx unit_root(long long q, long long p) {
  if (p <= 0) throw DomainError("unit_root: modulus must be positive");
  long long r = q % p;
  if (r < 0) r += p;
  if (r == 0) return {1.0, 0.0};
  if (4 * r == p) return {0.0, 1.0};
  if (2 * r == p) return {-1.0, 0.0};
  if (4 * r == 3 * p) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(p);
  return {std::cos(angle), std::sin(angle)};
}

CMatrix dft_matrix(std::size_t p) {
  if (p == 0) throw DomainError("dft_matrix: size must be positive");
  CMatrix f(p, p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  const auto pp = static_cast<long long>(p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k)
      f(j, k) = scale * unit_root(static_cast<long long>((j * k) % p), pp);
  return f;
}

CMatrix hadamard_sylvester(unsigned k) {
  if (k > 16) throw DomainError("hadamard_sylvester: k must be <= 16");
  const std::size_t n = std::size_t{1} << k;
  CMatrix h(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const bool odd = std::popcount(i & j) % 2 != 0;
      h(i, j) = odd ? -scale : scale;
    }
  return h;
}

double unitarity_defect(const CMatrix& u) {
  const CMatrix g = u.adjoint() * u;
  return frobenius_norm(g - CMatrix::identity(g.rows()));
}

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
  require_nonempty(h, "hermitian_eigenvalues");
  if (h.rows() != h.cols()) throw DimensionError("hermitian_eigenvalues: matrix not square");
  const std::size_t k = h.rows();
  std::vector<double> re(k * k), im(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      // Symmetrise to guard against round-off asymmetry in the input.
      const cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      re[i * k + j] = v.real();
      im[i * k + j] = v.imag();
    }
  return detail::hermitian_all_eigenvalues(re, im, k);
}

}  // namespace blockcoh
