#pragma once

namespace blockcoh {

/// ln Gamma(p) for p > 0 (Lanczos, g = 7, nine terms; reflection below 1/2).
double log_gamma(double p);

/// ln B(p, q) = ln Gamma(p) + ln Gamma(q) - ln Gamma(p + q).
double log_beta(double p, double q);

/// Regularized incomplete beta I_x(p, q), continued fraction (modified Lentz)
/// with the symmetry switch at x > (p + 1) / (p + q + 2).
double reg_inc_beta(double x, double p, double q);

/// ln I_x(p, q); stays finite where I_x underflows. Returns -inf at x = 0.
double log_reg_inc_beta(double x, double p, double q);

/// Binary entropy in nats, -rho ln rho - (1 - rho) ln(1 - rho).
double shannon_entropy(double rho);

}  // namespace blockcoh
