#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockcoh/blockframe.hpp"
#include "blockcoh/flipping.hpp"
#include "blockcoh/randomgrass.hpp"
#include "blockcoh/rng.hpp"

namespace blockcoh {

struct SignalSpec {
  std::size_t m = 0, r = 0, k = 0;
  double dynamic_range = 1.0;
  Field field = Field::real;
};

struct BlockSignal {
  std::vector<cplx> x;               // length m r
  std::vector<std::size_t> support;  // ascending block indices
};

/// Uniform k-subset of blocks; active magnitudes uniform on [1, DR] with a
/// random sign (real) or phase (complex).
BlockSignal gen_signal(const SignalSpec& spec, CounterRng& rng);

/// y = A x.
std::vector<cplx> measure(const BlockFrame& a, const std::vector<cplx>& x);

/// The k blocks with largest ||A_i* y||_2, ascending; ties to the lower index.
std::vector<std::size_t> one_step_group_threshold(const BlockFrame& a, const std::vector<cplx>& y,
                                                  std::size_t k);

/// |S \ S_hat| / |S|.
double ndp(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& estimate);

/// A fixed frame, or a random one regenerated every trial.
struct FrameSource {
  std::string label;
  std::optional<BlockFrame> fixed;
  std::optional<RandomFrameSpec> random;  // n, r, m used; seed and trial are set per trial
};

struct NdpRow {
  std::string label;
  std::size_t k = 0;
  double dynamic_range = 0.0;
  double mean_ndp = 0.0;
  double stderr_ndp = 0.0;
  std::size_t trials = 0;
  bool operator==(const NdpRow&) const = default;
};

struct NdpOptions {
  /// Additive white Gaussian noise at this SNR (dB) when set.
  std::optional<double> snr_db;
  Field signal_field = Field::real;
};

/// Mean NDP per (frame, k, DR). Draws depend on (trial, k) only, so every
/// frame and every dynamic range sees the same supports, signs and uniforms;
/// random frames are redrawn per trial.
std::vector<NdpRow> run_ndp_experiment(const std::vector<FrameSource>& frames,
                                       const std::vector<std::size_t>& k_grid,
                                       const std::vector<double>& dr_set, std::size_t trials,
                                       std::uint64_t seed, unsigned threads = 1,
                                       const NdpOptions& opts = {});

struct FlipTableRow {
  std::size_t r = 0;
  std::size_t realizations = 0;
  double mean_before = 0.0;
  double mean_after = 0.0;
  double improvement_pct = 0.0;  // 100 (1 - mean_after / mean_before)
  double bound_lemma2 = 0.0;
  std::size_t decreased = 0;     // runs with nu_after < nu_before
  std::size_t within_bound = 0;  // runs with nu_after <= bound
  std::size_t gram_preserved = 0;
  std::vector<double> before, after, mu;
  bool operator==(const FlipTableRow&) const = default;
};

/// Algorithm 1 on random real frames (n, m, r) for every r in r_set.
std::vector<FlipTableRow> run_flipping_table(std::size_t n, std::size_t m,
                                             const std::vector<std::size_t>& r_set,
                                             std::size_t realizations, std::uint64_t seed,
                                             unsigned threads = 1,
                                             NormVariant variant = NormVariant::spectral);

}  // namespace blockcoh
