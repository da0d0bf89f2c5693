#pragma once

#include <cstddef>
#include <cstdint>

#include "blockcoh/matrix.hpp"

namespace blockcoh {

/// Block structure (m blocks of n x r) plus field. Valid when m >= 2,
/// 1 <= r < n and m r > n.
struct BoundInputs {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t r = 0;
  Field field = Field::complex;
};

/// Throws DomainError unless b is in the frame regime.
void check_regime(const BoundInputs& b);

/// sqrt((mr - n) / (n (m - 1))): no block frame has smaller worst-case coherence.
double welch_block_lower(const BoundInputs& b);
/// sqrt(r / n) for unions of orthobases; r must divide n.
double orthobases_lower(std::size_t n, std::size_t r);
/// Rankin bound on the minimum chordal distance, sqrt(r(n-r)/n * m/(m-1)).
double rankin_chordal(const BoundInputs& b);
/// m -> infinity form, sqrt(r(n-r)/n).
double rankin_chordal_tight(std::size_t n, std::size_t r);
/// Upper bound on the minimum spectral distance, sqrt((n-r)/n * m/(m-1)) capped at 1.
double spectral_distance_upper(const BoundInputs& b);
/// Most r-dimensional equi-isoclinic subspaces that fit in dimension n.
std::uint64_t max_equiisoclinic(std::size_t n, std::size_t r, Field field);
/// Most n x n orthobases a union can hold while meeting sqrt(r/n).
std::uint64_t max_blocks_orthobases(std::size_t n, Field field);

/// Upper bound on P{lambda_1 >= lambda1} for the largest squared singular
/// value between two uniform random r-planes in R^n. Requires n >= 2r.
double tail_bound_G(double lambda1, std::size_t n, std::size_t r);
/// ln of the above.
double log_tail_bound_G(double lambda1, std::size_t n, std::size_t r);

/// beta ln a + ((1 - 2 beta)/2) ln(1 - a beta) - (1 - beta) ln(1 - beta).
double exponent_psi(double a, double beta);

struct ThresholdSolution {
  double beta = 0.0;
  double a_hat = 0.0;
  /// psi at the root, evaluated through the log-gap variable.
  double residual = 0.0;
  /// s = -ln(1 - a_hat beta). Near beta = 1/2 the root sits so close to 1/beta
  /// that only s carries the information.
  double log_gap = 0.0;
};

/// Unique root of exponent_psi(., beta) on [2, 1/beta), beta in (0, 1/2).
ThresholdSolution solve_a_hat(double beta);

}  // namespace blockcoh
