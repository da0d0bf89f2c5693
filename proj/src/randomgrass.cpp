#include "blockcoh/randomgrass.hpp"

#include <algorithm>
#include <cmath>

#include "blockcoh/bounds.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/parallel.hpp"

namespace blockcoh {
namespace {

CMatrix gaussian(std::size_t n, std::size_t r, CounterRng& rng) {
  CMatrix g(n, r);
  for (auto& z : g.data()) z = cplx(rng.normal(), 0.0);
  return g;
}

// Blocks side by side, without the frame-regime check.
CMatrix sample_blocks(const RandomFrameSpec& spec) {
  CMatrix data(spec.n, spec.m * spec.r);
  for (std::size_t i = 0; i < spec.m; ++i) {
    CounterRng rng = CounterRng::substream(spec.seed, {spec.trial, i});
    const CMatrix u = sample_subspace(spec.n, spec.r, rng);
    for (std::size_t t = 0; t < spec.n; ++t)
      for (std::size_t b = 0; b < spec.r; ++b) data(t, i * spec.r + b) = u(t, b);
  }
  return data;
}

// Few blocks that do not span R^n are not a frame; scan the pairs directly.
double pairwise_mu(const CMatrix& data, std::size_t r) {
  const std::size_t m = data.cols() / r;
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      best = std::max(best, spectral_norm(data.columns(i * r, r).adjoint() * data.columns(j * r, r)));
  return best;
}

}  // namespace

CMatrix sample_subspace(std::size_t n, std::size_t r, CounterRng& rng) {
  if (r == 0 || r > n) throw DomainError("sample_subspace requires 1 <= r <= n");
  try {
    return qr_orthonormal(gaussian(n, r, rng));
  } catch (const DegenerateInputError&) {
    return qr_orthonormal(gaussian(n, r, rng));
  }
}

BlockFrame sample_block_frame(const RandomFrameSpec& spec) {
  if (spec.m < 2) throw DomainError("random frame needs m >= 2");
  if (spec.r == 0 || spec.r >= spec.n) throw DomainError("random frame needs 1 <= r < n");
  return BlockFrame::make(sample_blocks(spec), spec.r, Field::real);
}

std::size_t default_block_count(std::size_t n, std::size_t r, std::size_t m_cap) {
  if (r == 0) throw DomainError("r must be positive");
  const std::size_t ratio_sq = (n * n) / (r * r);
  return std::max<std::size_t>(2, std::min(ratio_sq, m_cap));
}

std::vector<MuCurveRow> empirical_mu_curve(std::size_t n, const std::vector<std::size_t>& r_grid,
                                           std::size_t m_cap, std::size_t trials, std::uint64_t seed,
                                           unsigned threads) {
  if (trials == 0) throw DomainError("need at least one trial");
  std::vector<MuCurveRow> rows;
  for (std::size_t r : r_grid) {
    if (r == 0 || 2 * r >= n) throw DomainError("each r must satisfy 0 < 2r < n");
    MuCurveRow row;
    row.r = r;
    row.beta = static_cast<double>(r) / static_cast<double>(n);
    row.m = default_block_count(n, r, m_cap);
    std::vector<double> mus(trials);
    // Parallel over trials; each frame is scanned single-threaded.
    parallel_for(trials, threads, [&](std::size_t t) {
      const RandomFrameSpec spec{n, r, row.m, derive_key(seed, {r}), t};
      mus[t] = row.m * r >= n ? mu(sample_block_frame(spec)) : pairwise_mu(sample_blocks(spec), r);
    });
    double sum = 0.0;
    for (double v : mus) {
      sum += v;
      row.max_mu = std::max(row.max_mu, v);
    }
    row.mean_mu = sum / static_cast<double>(trials);
    row.theory_mu = std::sqrt(solve_a_hat(row.beta).a_hat * row.beta);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace blockcoh
