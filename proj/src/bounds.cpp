#include "blockcoh/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blockcoh/errors.hpp"
#include "blockcoh/special.hpp"

namespace blockcoh {
namespace {

double d(std::size_t x) { return static_cast<double>(x); }

void check_tail_args(double lambda1, std::size_t n, std::size_t r) {
  if (r == 0) throw DomainError("tail_bound_G requires r >= 1");
  if (n < 2 * r) throw DomainError("tail_bound_G requires n >= 2r (lambda_1 = 1 otherwise)");
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0)) throw DomainError("tail_bound_G requires lambda1 in [0, 1]");
}

// psi written in s = -ln(1 - a beta), so a = (1 - e^-s) / beta.
double psi_of_gap(double s, double beta) {
  return beta * std::log(-std::expm1(-s) / beta) - 0.5 * (1.0 - 2.0 * beta) * s -
         (1.0 - beta) * std::log1p(-beta);
}

}  // namespace

void check_regime(const BoundInputs& b) {
  if (b.m < 2) throw DomainError("need at least two blocks");
  if (b.r < 1 || b.r >= b.n) throw DomainError("need 1 <= r < n");
  if (b.m * b.r <= b.n) throw DomainError("need m r > n");
}

double welch_block_lower(const BoundInputs& b) {
  check_regime(b);
  return std::sqrt((d(b.m) * d(b.r) - d(b.n)) / (d(b.n) * (d(b.m) - 1.0)));
}

double orthobases_lower(std::size_t n, std::size_t r) {
  if (r == 0 || r >= n) throw DomainError("orthobases_lower requires 1 <= r < n");
  if (n % r != 0) throw DomainError("orthobases_lower requires r to divide n");
  return std::sqrt(d(r) / d(n));
}

double rankin_chordal(const BoundInputs& b) {
  check_regime(b);
  return std::sqrt(d(b.r) * (d(b.n) - d(b.r)) / d(b.n) * d(b.m) / (d(b.m) - 1.0));
}

double rankin_chordal_tight(std::size_t n, std::size_t r) {
  if (r == 0 || r > n) throw DomainError("rankin_chordal_tight requires 1 <= r <= n");
  return std::sqrt(d(r) * (d(n) - d(r)) / d(n));
}

double spectral_distance_upper(const BoundInputs& b) {
  check_regime(b);
  const double v = (d(b.n) - d(b.r)) / d(b.n) * d(b.m) / (d(b.m) - 1.0);
  return std::min(1.0, std::sqrt(v));
}

std::uint64_t max_equiisoclinic(std::size_t n, std::size_t r, Field field) {
  if (r == 0 || r > n) throw DomainError("max_equiisoclinic requires 1 <= r <= n");
  const std::uint64_t N = n, R = r;
  if (field == Field::complex) return N * N - R * R + 1;
  return N * (N + 1) / 2 - R * (R + 1) / 2 + 1;
}

std::uint64_t max_blocks_orthobases(std::size_t n, Field field) {
  if (n < 1) throw DomainError("max_blocks_orthobases requires n >= 1");
  const std::uint64_t N = n;
  if (field == Field::complex) return 2 * (N + 1) * (N - 1);
  return (N - 1) * (N + 2);
}

double log_tail_bound_G(double lambda1, std::size_t n, std::size_t r) {
  check_tail_args(lambda1, n, r);
  const double nn = d(n), rr = d(r);
  const double p = (nn - 2.0 * rr + 1.0) / 2.0;
  const double q = (2.0 * rr - 1.0) / 2.0;
  return 0.5 * std::log(std::numbers::pi) + log_beta(q, p) -
         2.0 * log_beta(rr / 2.0, (nn - rr) / 2.0) + log_reg_inc_beta(1.0 - lambda1, p, q);
}

double tail_bound_G(double lambda1, std::size_t n, std::size_t r) {
  return std::exp(log_tail_bound_G(lambda1, n, r));
}

double exponent_psi(double a, double beta) {
  if (!(beta > 0.0 && beta < 0.5)) throw DomainError("exponent_psi requires beta in (0, 1/2)");
  if (!(a >= 2.0 && a * beta < 1.0)) throw DomainError("exponent_psi requires 2 <= a < 1/beta");
  return beta * std::log(a) + 0.5 * (1.0 - 2.0 * beta) * std::log1p(-a * beta) -
         (1.0 - beta) * std::log1p(-beta);
}

ThresholdSolution solve_a_hat(double beta) {
  if (!(beta > 0.0 && beta < 0.5)) throw DomainError("solve_a_hat requires beta in (0, 1/2)");
  double lo = -std::log1p(-2.0 * beta);  // a = 2, where psi > 0
  double hi = lo + 1.0;
  while (psi_of_gap(hi, beta) > 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw ConvergenceError("solve_a_hat: failed to bracket the root");
  }
  // Bisect to adjacent doubles.
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (psi_of_gap(mid, beta) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double s = std::abs(psi_of_gap(lo, beta)) <= std::abs(psi_of_gap(hi, beta)) ? lo : hi;
  ThresholdSolution out;
  out.beta = beta;
  out.log_gap = s;
  out.residual = psi_of_gap(s, beta);
  // Once e^-s drops below half an ulp of 1 the quotient rounds onto 1/beta;
  // the true root is strictly below it.
  out.a_hat = std::min(-std::expm1(-s) / beta, std::nextafter(1.0 / beta, 0.0));
  out.a_hat = std::max(out.a_hat, 2.0);
  return out;
}

}  // namespace blockcoh
