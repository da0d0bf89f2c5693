#include "blockcoh/flipping.hpp"

#include <cmath>
#include <limits>

#include "blockcoh/detail/small_eig.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/parallel.hpp"
#include "blockcoh/rng.hpp"

namespace blockcoh {
namespace {

constexpr double kTieTol = 1e-12;

// ||X|| for an n x r matrix given X* X (r x r Hermitian, split form).
double norm_from_gram(const std::vector<double>& gr, const std::vector<double>& gi, std::size_t r,
                      NormVariant v) {
  if (v == NormVariant::frobenius) {
    double tr = 0.0;
    for (std::size_t a = 0; a < r; ++a) tr += gr[a * r + a];
    return std::sqrt(std::max(tr, 0.0));
  }
  return std::sqrt(std::max(detail::hermitian_max_eigenvalue(gr, gi, r), 0.0));
}

}  // namespace

std::string to_string(NormVariant v) { return v == NormVariant::spectral ? "spectral" : "frobenius"; }

NormVariant norm_variant_from_string(const std::string& s) {
  if (s == "spectral") return NormVariant::spectral;
  if (s == "frobenius") return NormVariant::frobenius;
  throw ValidationError("norm variant must be 'spectral' or 'frobenius'");
}

double lemma2_bound(std::size_t m) {
  if (m < 2) throw DomainError("lemma2_bound requires m >= 2");
  const double mm = static_cast<double>(m);
  return (std::sqrt(mm) + 1.0) / (mm - 1.0);
}

double thm14_min_c(std::size_t m, std::size_t n, std::size_t r) {
  if (r == 0 || n == 0) throw DomainError("thm14_min_c requires n, r > 0");
  const double mm = static_cast<double>(m);
  const double ratio = static_cast<double>(n) / static_cast<double>(r);
  if (m < 3) throw DomainError("thm14_min_c requires m >= 3");
  if (mm <= ratio) throw DomainError("thm14_min_c requires m > n / r");
  return ratio * std::sqrt((mm - 1.0) / (mm - ratio) / std::log(mm) * lemma2_bound(m));
}

BlockFrame apply_signs(const BlockFrame& a, const std::vector<int>& signs) {
  if (signs.size() != a.m()) throw DimensionError("one sign per block");
  CMatrix data = a.data();
  const std::size_t r = a.r();
  for (std::size_t t = 0; t < data.rows(); ++t)
    for (std::size_t i = 0; i < a.m(); ++i)
      if (signs[i] < 0)
        for (std::size_t b = 0; b < r; ++b) data(t, i * r + b) = -data(t, i * r + b);
  return BlockFrame::make(std::move(data), r, a.field());
}

FlipResult flip(const BlockFrame& a, const FlipConfig& cfg, unsigned threads) {
  const std::size_t n = a.n(), r = a.r(), m = a.m();
  if (m < 2) throw DomainError("flip requires at least two blocks");
  const CMatrix& A = a.data();

  // F kept explicitly (n x r); F* F, F* A_k and A_k* A_k give both candidate norms.
  std::vector<cplx> F(n * r);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t b = 0; b < r; ++b) F[t * r + b] = A(t, b);

  FlipResult res{std::vector<int>(m, 1), a};
  res.steps.reserve(m - 1);
  std::vector<double> pr(r * r), pi(r * r), mr(r * r), mi(r * r);
  for (std::size_t k = 1; k < m; ++k) {
    // (F +- A_k)* (F +- A_k) = F*F + A_k*A_k +- (F*A_k + A_k*F)
    for (std::size_t x = 0; x < r; ++x) {
      for (std::size_t y = 0; y < r; ++y) {
        cplx ff = 0.0, aa = 0.0, fa = 0.0, af = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const cplx fx = F[t * r + x], fy = F[t * r + y];
          const cplx ax = A(t, k * r + x), ay = A(t, k * r + y);
          ff += std::conj(fx) * fy;
          aa += std::conj(ax) * ay;
          fa += std::conj(fx) * ay;
          af += std::conj(ax) * fy;
        }
        const cplx base = ff + aa, cross = fa + af;
        pr[x * r + y] = (base + cross).real();
        pi[x * r + y] = (base + cross).imag();
        mr[x * r + y] = (base - cross).real();
        mi[x * r + y] = (base - cross).imag();
      }
    }
    FlipStep step;
    step.plus = norm_from_gram(pr, pi, r, cfg.norm_variant);
    step.minus = norm_from_gram(mr, mi, r, cfg.norm_variant);
    step.sign = step.plus <= step.minus + kTieTol ? 1 : -1;
    res.signs[k] = step.sign;
    res.steps.push_back(step);
    const double s = step.sign;
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t b = 0; b < r; ++b) F[t * r + b] += s * A(t, k * r + b);
  }
  {
    std::vector<double> gr(r * r), gi(r * r);
    for (std::size_t x = 0; x < r; ++x)
      for (std::size_t y = 0; y < r; ++y) {
        cplx s = 0.0;
        for (std::size_t t = 0; t < n; ++t) s += std::conj(F[t * r + x]) * F[t * r + y];
        gr[x * r + y] = s.real();
        gi[x * r + y] = s.imag();
      }
    res.final_sum_norm = norm_from_gram(gr, gi, r, cfg.norm_variant);
  }
  if (cfg.norm_variant == NormVariant::frobenius) {
    // Parallelogram law: ||F_m||_F^2 <= m r.
    const double bound = static_cast<double>(m * r);
    if (res.final_sum_norm * res.final_sum_norm > bound * (1.0 + 1e-12))
      throw ConvergenceError("Frobenius flipping exceeded the parallelogram bound");
  }

  res.flipped = apply_signs(a, res.signs);
  const GramMap before = gram_map(a, threads);
  const GramMap after = gram_map(res.flipped, threads);
  res.gram_preserved = before == after;
  res.mu_before = before.max_off_diagonal();
  res.mu_after = after.max_off_diagonal();
  res.nu_before = nu(a);
  res.nu_after = nu(res.flipped);
  res.bound_lemma2 = lemma2_bound(m);
  res.within_lemma2 = res.nu_after <= res.bound_lemma2;
  return res;
}

FlipResult random_flip_search(const BlockFrame& a, std::size_t trials, std::uint64_t seed,
                              unsigned threads) {
  const std::size_t m = a.m();
  if (m < 2) throw DomainError("random_flip_search requires at least two blocks");
  if (trials < 1) throw DomainError("random_flip_search requires trials >= 1");
  std::vector<double> nus(trials);
  std::vector<std::vector<int>> signs(trials, std::vector<int>(m, 1));
  parallel_for(trials, threads, [&](std::size_t t) {
    CounterRng rng = CounterRng::substream(seed, {t});
    for (std::size_t i = 1; i < m; ++i) signs[t][i] = (rng.next_u64() >> 63) ? -1 : 1;
    nus[t] = nu(apply_signs(a, signs[t]));
  });
  std::size_t best = 0;
  for (std::size_t t = 1; t < trials; ++t)
    if (nus[t] < nus[best]) best = t;

  FlipResult res{signs[best], apply_signs(a, signs[best])};
  const GramMap before = gram_map(a, threads);
  const GramMap after = gram_map(res.flipped, threads);
  res.gram_preserved = before == after;
  res.mu_before = before.max_off_diagonal();
  res.mu_after = after.max_off_diagonal();
  res.nu_before = nu(a);
  res.nu_after = nus[best];
  res.bound_lemma2 = lemma2_bound(m);
  res.within_lemma2 = res.nu_after <= res.bound_lemma2;
  return res;
}

}  // namespace blockcoh
