#include "blockcoh/blockcs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "blockcoh/errors.hpp"
#include "blockcoh/parallel.hpp"

namespace blockcoh {
namespace {
// Stream tags keep signal, frame and noise draws independent.
constexpr std::uint64_t kSignalTag = 1;
constexpr std::uint64_t kFrameTag = 2;
constexpr std::uint64_t kNoiseTag = 3;
}  // namespace

BlockSignal gen_signal(const SignalSpec& spec, CounterRng& rng) {
  if (spec.k < 1 || spec.k > spec.m) throw DomainError("gen_signal requires 1 <= k <= m");
  if (spec.r < 1) throw DomainError("gen_signal requires r >= 1");
  if (!(spec.dynamic_range >= 1.0)) throw DomainError("dynamic range must be >= 1");
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  std::vector<std::size_t> idx(spec.m);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < spec.k; ++i) std::swap(idx[i], idx[i + rng.below(spec.m - i)]);
  BlockSignal s;
  s.support.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(spec.k));
  std::sort(s.support.begin(), s.support.end());
  s.x.assign(spec.m * spec.r, cplx(0.0, 0.0));
  for (std::size_t i : s.support) {
    for (std::size_t b = 0; b < spec.r; ++b) {
      const double mag = 1.0 + (spec.dynamic_range - 1.0) * rng.uniform();
      cplx v;
      if (spec.field == Field::real) {
        v = cplx((rng.next_u64() >> 63) ? -mag : mag, 0.0);
      } else {
        v = std::polar(mag, 2.0 * std::numbers::pi * rng.uniform());
      }
      s.x[i * spec.r + b] = v;
    }
  }
  return s;
}

std::vector<cplx> measure(const BlockFrame& a, const std::vector<cplx>& x) {
  const CMatrix& A = a.data();
  if (x.size() != A.cols()) throw DimensionError("signal length must equal m r");
  std::vector<cplx> y(A.rows(), cplx(0.0, 0.0));
  for (std::size_t t = 0; t < A.rows(); ++t) {
    const auto row = A.row(t);
    cplx s = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * x[c];
    y[t] = s;
  }
  return y;
}

std::vector<std::size_t> one_step_group_threshold(const BlockFrame& a, const std::vector<cplx>& y,
                                                  std::size_t k) {
  const CMatrix& A = a.data();
  const std::size_t m = a.m(), r = a.r();
  if (y.size() != A.rows()) throw DimensionError("measurement length must equal n");
  if (k < 1 || k > m) throw DomainError("one_step_group_threshold requires 1 <= k <= m");
  std::vector<double> score(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double s2 = 0.0;
    for (std::size_t b = 0; b < r; ++b) {
      cplx s = 0.0;
      for (std::size_t t = 0; t < A.rows(); ++t) s += std::conj(A(t, i * r + b)) * y[t];
      s2 += std::norm(s);
    }
    score[i] = s2;
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t p, std::size_t q) { return score[p] > score[q]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

double ndp(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& estimate) {
  if (truth.empty()) throw DomainError("ndp needs a nonempty true support");
  std::size_t missed = 0;
  for (std::size_t s : truth)
    if (std::find(estimate.begin(), estimate.end(), s) == estimate.end()) ++missed;
  return static_cast<double>(missed) / static_cast<double>(truth.size());
}

std::vector<NdpRow> run_ndp_experiment(const std::vector<FrameSource>& frames,
                                       const std::vector<std::size_t>& k_grid,
                                       const std::vector<double>& dr_set, std::size_t trials,
                                       std::uint64_t seed, unsigned threads, const NdpOptions& opts) {
  if (frames.empty()) throw DomainError("no frames given");
  if (trials == 0) throw DomainError("need at least one trial");
  std::size_t n = 0, m = 0, r = 0;
  for (const auto& f : frames) {
    std::size_t fn, fm, fr;
    if (f.fixed) {
      fn = f.fixed->n();
      fm = f.fixed->m();
      fr = f.fixed->r();
    } else if (f.random) {
      fn = f.random->n;
      fm = f.random->m;
      fr = f.random->r;
    } else {
      throw DomainError("frame source '" + f.label + "' is empty");
    }
    if (n == 0) {
      n = fn;
      m = fm;
      r = fr;
    } else if (fn != n || fm != m || fr != r) {
      throw DimensionError("all frames must share (m, n, r)");
    }
  }

  std::vector<NdpRow> rows;
  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    const FrameSource& src = frames[fi];
    for (std::size_t k : k_grid) {
      if (k < 1 || k > m) throw DomainError("k out of range");
      for (std::size_t di = 0; di < dr_set.size(); ++di) {
        const double dr = dr_set[di];
        std::vector<double> vals(trials);
        parallel_for(trials, threads, [&](std::size_t t) {
          CounterRng srng = CounterRng::substream(seed, {kSignalTag, t, k});
          const BlockSignal sig = gen_signal({m, r, k, dr, opts.signal_field}, srng);
          std::optional<BlockFrame> fresh;
          if (!src.fixed) {
            RandomFrameSpec spec = *src.random;
            spec.seed = derive_key(seed, {kFrameTag, fi});
            spec.trial = t;
            fresh = sample_block_frame(spec);
          }
          const BlockFrame& A = src.fixed ? *src.fixed : *fresh;
          std::vector<cplx> y = measure(A, sig.x);
          if (opts.snr_db) {
            double power = 0.0;
            for (const auto& v : y) power += std::norm(v);
            power /= static_cast<double>(y.size());
            const double sigma = std::sqrt(power / std::pow(10.0, *opts.snr_db / 10.0));
            CounterRng nrng = CounterRng::substream(seed, {kNoiseTag, t, k, di});
            for (auto& v : y)
              v += A.field() == Field::real && opts.signal_field == Field::real
                       ? cplx(sigma * nrng.normal(), 0.0)
                       : cplx(sigma * nrng.normal(), sigma * nrng.normal()) / std::sqrt(2.0);
          }
          vals[t] = ndp(sig.support, one_step_group_threshold(A, y, k));
        });
        NdpRow row{src.label, k, dr, 0.0, 0.0, trials};
        double sum = 0.0;
        for (double v : vals) sum += v;
        row.mean_ndp = sum / static_cast<double>(trials);
        if (trials > 1) {
          double ss = 0.0;
          for (double v : vals) ss += (v - row.mean_ndp) * (v - row.mean_ndp);
          row.stderr_ndp = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<FlipTableRow> run_flipping_table(std::size_t n, std::size_t m,
                                             const std::vector<std::size_t>& r_set,
                                             std::size_t realizations, std::uint64_t seed,
                                             unsigned threads, NormVariant variant) {
  if (realizations == 0) throw DomainError("need at least one realization");
  std::vector<FlipTableRow> rows;
  for (std::size_t r : r_set) {
    FlipTableRow row;
    row.r = r;
    row.realizations = realizations;
    row.bound_lemma2 = lemma2_bound(m);
    row.before.resize(realizations);
    row.after.resize(realizations);
    row.mu.resize(realizations);
    std::vector<char> preserved(realizations, 0);
    // Realizations in parallel; each flip runs its scans single-threaded.
    parallel_for(realizations, threads, [&](std::size_t t) {
      const BlockFrame a = sample_block_frame({n, r, m, derive_key(seed, {r}), t});
      FlipConfig cfg;
      cfg.norm_variant = variant;
      const FlipResult fr = flip(a, cfg, 1);
      row.before[t] = fr.nu_before;
      row.after[t] = fr.nu_after;
      row.mu[t] = fr.mu_after;
      preserved[t] = fr.gram_preserved && fr.mu_after == fr.mu_before;
    });
    double sb = 0.0, sa = 0.0;
    for (std::size_t t = 0; t < realizations; ++t) {
      sb += row.before[t];
      sa += row.after[t];
      if (row.after[t] < row.before[t]) ++row.decreased;
      if (row.after[t] <= row.bound_lemma2) ++row.within_bound;
      if (preserved[t]) ++row.gram_preserved;
    }
    row.mean_before = sb / static_cast<double>(realizations);
    row.mean_after = sa / static_cast<double>(realizations);
    row.improvement_pct = 100.0 * (1.0 - row.mean_after / row.mean_before);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace blockcoh
