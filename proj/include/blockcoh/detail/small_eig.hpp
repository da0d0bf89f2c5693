#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Dense symmetric eigen kernels shared by the matrix core and the pairwise
// coherence loops. Inputs are row-major and are overwritten.

namespace blockcoh::detail {

/// All eigenvalues of a real symmetric n x n matrix, ascending.
std::vector<double> sym_eigenvalues(std::span<double> a, std::size_t n);

/// Largest eigenvalue of a real symmetric n x n matrix.
double sym_max_eigenvalue(std::span<double> a, std::size_t n);

/// Largest eigenvalue of a Hermitian k x k matrix given as split real and
/// imaginary row-major parts. `im` may be empty for a real matrix. Applies the
/// spectral-norm policy: Jacobi for k <= 8, power iteration otherwise.
double hermitian_max_eigenvalue(std::span<const double> re, std::span<const double> im,
                                std::size_t k);

/// Same as above but returns every eigenvalue (always Jacobi).
std::vector<double> hermitian_all_eigenvalues(std::span<const double> re,
                                              std::span<const double> im, std::size_t k);

/// H = X* X for a k x k matrix X in split form; `xi` and `hi` empty when real.
void form_cross_hermitian(std::span<const double> xr, std::span<const double> xi, std::size_t k,
                          std::vector<double>& hr, std::vector<double>& hi);

/// Largest eigenvalue of X* X for a k x k matrix X in split form.
double cross_gram_max_sq_singular(std::span<const double> xr, std::span<const double> xi,
                                  std::size_t k, std::vector<double>& scratch_re,
                                  std::vector<double>& scratch_im);

}  // namespace blockcoh::detail
