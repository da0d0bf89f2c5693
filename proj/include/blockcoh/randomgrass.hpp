#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "blockcoh/blockframe.hpp"
#include "blockcoh/rng.hpp"

namespace blockcoh {

/// m independent uniform random r-planes in R^n. Block i of trial t is drawn
/// from the substream (seed, t, i).
struct RandomFrameSpec {
  std::size_t n = 0, r = 0, m = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

/// Gaussian n x r matrix orthonormalized; one retry on rank deficiency.
CMatrix sample_subspace(std::size_t n, std::size_t r, CounterRng& rng);

BlockFrame sample_block_frame(const RandomFrameSpec& spec);

struct MuCurveRow {
  double beta = 0.0;
  std::size_t r = 0, m = 0;
  double mean_mu = 0.0;
  double max_mu = 0.0;
  double theory_mu = 0.0;  // sqrt(a_hat(beta) beta)
  bool operator==(const MuCurveRow&) const = default;
};

/// m = min(floor((n/r)^2), m_cap) blocks per trial.
std::size_t default_block_count(std::size_t n, std::size_t r, std::size_t m_cap);

/// Empirical worst-case coherence of random frames against sqrt(a_hat beta).
std::vector<MuCurveRow> empirical_mu_curve(std::size_t n, const std::vector<std::size_t>& r_grid,
                                           std::size_t m_cap, std::size_t trials, std::uint64_t seed,
                                           unsigned threads = 1);

}  // namespace blockcoh
