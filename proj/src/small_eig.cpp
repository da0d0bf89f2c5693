#include "blockcoh/detail/small_eig.hpp"

#include <algorithm>
#include <cmath>

#include "blockcoh/errors.hpp"

namespace blockcoh::detail {
namespace {

constexpr int kMaxSweeps = 100;
constexpr std::size_t kJacobiLimit = 8;
constexpr int kMaxPowerIterations = 10000;
constexpr double kRayleighTol = 1e-13;
constexpr double kResidualTol = 1e-11;

// Cyclic Jacobi; on return the diagonal of `a` holds the eigenvalues.
void jacobi_diagonalize(std::span<double> a, std::size_t n) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += at(i, i) * at(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off == 0.0 || off <= 1e-32 * (diag + off)) return;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double g = at(r, p);
          const double h = at(r, q);
          const double new_rp = g - s * (h + g * tau);
          const double new_rq = h + s * (g - h * tau);
          at(r, p) = new_rp;
          at(p, r) = new_rp;
          at(r, q) = new_rq;
          at(q, r) = new_rq;
        }
      }
    }
  }
  throw ConvergenceError("Jacobi eigensolver did not converge");
}

// [[Re, -Im], [Im, Re]]: the real 2k x 2k image of a Hermitian k x k matrix.
std::vector<double> embed(std::span<const double> re, std::span<const double> im, std::size_t k) {
  const std::size_t n = 2 * k;
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double r = re[i * k + j];
      const double m = im[i * k + j];
      out[i * n + j] = r;
      out[(i + k) * n + (j + k)] = r;
      out[i * n + (j + k)] = -m;
      out[(i + k) * n + j] = m;
    }
  }
  return out;
}

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double jacobi_max(std::span<const double> re, std::span<const double> im, std::size_t k) {
  if (im.empty() || all_zero(im)) {
    std::vector<double> a(re.begin(), re.end());
    return sym_max_eigenvalue(a, k);
  }
  auto a = embed(re, im, k);
  return sym_max_eigenvalue(a, 2 * k);
}

// Closed form of the single Jacobi rotation that diagonalises a 2 x 2 block.
double max_eig_2x2(double a, double c, double b_abs_sq) {
  const double half_diff = 0.5 * (a - c);
  return 0.5 * (a + c) + std::sqrt(half_diff * half_diff + b_abs_sq);
}

// Deterministic, non-degenerate start: 1 + frac(j * golden ratio) / 2.
double start_entry(std::size_t j) {
  constexpr double kGolden = 0.6180339887498949;
  const double x = static_cast<double>(j) * kGolden;
  return 1.0 + 0.5 * (x - std::floor(x));
}

bool power_iteration(std::span<const double> re, std::span<const double> im, std::size_t k,
                     double& lambda_out) {
  const bool real = im.empty();
  std::vector<double> vr(k), vi(k, 0.0), wr(k), wi(k, 0.0);
  double norm = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    vr[j] = start_entry(j);
    norm += vr[j] * vr[j];
  }
  norm = std::sqrt(norm);
  for (auto& x : vr) x /= norm;

  double lambda_prev = 0.0;
  for (int it = 0; it < kMaxPowerIterations; ++it) {
    for (std::size_t i = 0; i < k; ++i) {
      double sr = 0.0, si = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double hr = re[i * k + j];
        if (real) {
          sr += hr * vr[j];
        } else {
          const double hi = im[i * k + j];
          sr += hr * vr[j] - hi * vi[j];
          si += hr * vi[j] + hi * vr[j];
        }
      }
      wr[i] = sr;
      wi[i] = si;
    }
    double lambda = 0.0;
    double wnorm = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      lambda += vr[j] * wr[j] + vi[j] * wi[j];
      wnorm += wr[j] * wr[j] + wi[j] * wi[j];
    }
    wnorm = std::sqrt(wnorm);
    if (wnorm == 0.0) return false;
    double resid = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double dr = wr[j] - lambda * vr[j];
      const double di = wi[j] - lambda * vi[j];
      resid += dr * dr + di * di;
    }
    resid = std::sqrt(resid);
    const double scale = std::max(std::abs(lambda), 1e-300);
    if (it > 0 && std::abs(lambda - lambda_prev) <= kRayleighTol * scale &&
        resid <= kResidualTol * scale) {
      lambda_out = lambda;
      return true;
    }
    lambda_prev = lambda;
    for (std::size_t j = 0; j < k; ++j) {
      vr[j] = wr[j] / wnorm;
      vi[j] = wi[j] / wnorm;
    }
  }
  return false;
}

}  // namespace

std::vector<double> sym_eigenvalues(std::span<double> a, std::size_t n) {
  jacobi_diagonalize(a, n);
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i * n + i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

double sym_max_eigenvalue(std::span<double> a, std::size_t n) {
  if (n == 1) return a[0];
  if (n == 2) return max_eig_2x2(a[0], a[3], a[1] * a[1]);
  jacobi_diagonalize(a, n);
  double best = a[0];
  for (std::size_t i = 1; i < n; ++i) best = std::max(best, a[i * n + i]);
  return best;
}

double hermitian_max_eigenvalue(std::span<const double> re, std::span<const double> im,
                                std::size_t k) {
  if (k == 0) throw DimensionError("empty Hermitian matrix");
  if (k == 1) return re[0];
  if (k == 2) {
    const double b_im = im.empty() ? 0.0 : im[1];
    return max_eig_2x2(re[0], re[3], re[1] * re[1] + b_im * b_im);
  }
  if (k <= kJacobiLimit) return jacobi_max(re, im, k);
  double lambda = 0.0;
  if (power_iteration(re, im, k, lambda)) return lambda;
  return jacobi_max(re, im, k);
}

std::vector<double> hermitian_all_eigenvalues(std::span<const double> re,
                                              std::span<const double> im, std::size_t k) {
  if (im.empty() || all_zero(im)) {
    std::vector<double> a(re.begin(), re.end());
    return sym_eigenvalues(a, k);
  }
  auto a = embed(re, im, k);
  auto doubled = sym_eigenvalues(a, 2 * k);
  std::vector<double> ev(k);
  for (std::size_t i = 0; i < k; ++i) ev[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return ev;
}

void form_cross_hermitian(std::span<const double> xr, std::span<const double> xi, std::size_t k,
                          std::vector<double>& hr, std::vector<double>& hi) {
  const bool real = xi.empty();
  hr.assign(k * k, 0.0);
  if (real)
    hi.clear();
  else
    hi.assign(k * k, 0.0);
  // Upper triangle only, then mirrored.
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      double sr = 0.0, si = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        const double ar = xr[c * k + a];
        const double br = xr[c * k + b];
        if (real) {
          sr += ar * br;
        } else {
          const double ai = xi[c * k + a];
          const double bi = xi[c * k + b];
          sr += ar * br + ai * bi;
          si += ar * bi - ai * br;
        }
      }
      hr[a * k + b] = sr;
      hr[b * k + a] = sr;
      if (!real) {
        hi[a * k + b] = si;
        hi[b * k + a] = -si;
      }
    }
  }
}

double cross_gram_max_sq_singular(std::span<const double> xr, std::span<const double> xi,
                                  std::size_t k, std::vector<double>& scratch_re,
                                  std::vector<double>& scratch_im) {
  if (k == 1) return xr[0] * xr[0] + (xi.empty() ? 0.0 : xi[0] * xi[0]);
  form_cross_hermitian(xr, xi, k, scratch_re, scratch_im);
  return hermitian_max_eigenvalue(scratch_re, scratch_im, k);
}

}  // namespace blockcoh::detail
