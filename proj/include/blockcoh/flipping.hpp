#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "blockcoh/blockframe.hpp"

namespace blockcoh {

enum class NormVariant { spectral, frobenius };

std::string to_string(NormVariant v);
NormVariant norm_variant_from_string(const std::string& s);

struct FlipConfig {
  NormVariant norm_variant = NormVariant::spectral;
  /// Constant c of the target nu <= c mu sqrt(r log m / n). Reported only.
  double c = 1.0;
  std::size_t search_trials = 0;
  /// e^-1 / 256, the martingale constant behind the existence argument.
  static constexpr double c0 = 0.0014369395706254104;
};

/// One greedy step: ||F_k + A_{k+1}|| and ||F_k - A_{k+1}||.
struct FlipStep {
  double plus = 0.0;
  double minus = 0.0;
  int sign = 1;
};

struct FlipResult {
  FlipResult(std::vector<int> s, BlockFrame f) : signs(std::move(s)), flipped(std::move(f)) {}

  std::vector<int> signs;  // a_i, signs[0] = +1
  BlockFrame flipped;
  double mu_before = 0.0, mu_after = 0.0;
  double nu_before = 0.0, nu_after = 0.0;
  double bound_lemma2 = 0.0;       // (sqrt(m) + 1) / (m - 1)
  bool gram_preserved = false;     // gram maps equal entry for entry
  bool within_lemma2 = false;      // nu_after <= bound_lemma2
  double final_sum_norm = 0.0;     // ||F_m|| in the configured norm
  std::vector<FlipStep> steps;     // m - 1 entries (empty for random search)
};

/// Algorithm 1. Ties within 1e-12 keep the block unflipped.
FlipResult flip(const BlockFrame& a, const FlipConfig& cfg = {}, unsigned threads = 1);

/// Best of `trials` uniform sign vectors (first sign fixed) by nu; ties go to
/// the lowest trial index.
FlipResult random_flip_search(const BlockFrame& a, std::size_t trials, std::uint64_t seed,
                              unsigned threads = 1);

/// Block i multiplied by signs[i].
BlockFrame apply_signs(const BlockFrame& a, const std::vector<int>& signs);

/// (sqrt(m) + 1) / (m - 1).
double lemma2_bound(std::size_t m);

/// Smallest c with ((m-1)/(m-n/r)) (1/ln m) ((sqrt(m)+1)/(m-1)) <= c^2 (r/n)^2.
double thm14_min_c(std::size_t m, std::size_t n, std::size_t r);

}  // namespace blockcoh
