#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "blockcoh/matrix.hpp"
#include "blockcoh/parallel.hpp"

// Streaming evaluation of every cross-Gram A_i* A_j (i < j). The frame is held
// as split real / imaginary row-major arrays; a panel of blocks i is swept
// against column tiles with axpy-style row updates, so the inner loop is
// contiguous and vectorises without reassociation.

namespace blockcoh::detail {

struct SplitFrame {
  std::size_t n = 0, r = 0, m = 0, cols = 0;
  bool real = true;
  std::vector<double> re, im;  // n x cols, row-major; im empty when real

  SplitFrame(const CMatrix& data, std::size_t block_width, bool is_real)
      : n(data.rows()), r(block_width), m(data.cols() / block_width), cols(data.cols()),
        real(is_real), re(n * cols) {
    if (!real) im.resize(n * cols);
    const auto src = data.data();
    for (std::size_t k = 0; k < src.size(); ++k) {
      re[k] = src[k].real();
      if (!real) im[k] = src[k].imag();
    }
  }
};

inline std::size_t panel_blocks(std::size_t r) { return std::max<std::size_t>(1, 16 / r); }
inline std::size_t tile_blocks(std::size_t r) { return std::max<std::size_t>(1, 256 / r); }
inline std::size_t panel_count(const SplitFrame& f) {
  const std::size_t pb = panel_blocks(f.r);
  return (f.m + pb - 1) / pb;
}

/// visit(panel, i, j, xr, xi) for every i < j, X = A_i* A_j as r x r
/// row-major spans (xi empty when real). Panels run on up to `threads`
/// workers; within a panel pairs arrive in ascending (j, i) tile order.
template <class Visit>
void for_each_cross_gram(const SplitFrame& f, unsigned threads, Visit&& visit) {
  const std::size_t r = f.r, n = f.n, N = f.cols;
  const std::size_t pb = panel_blocks(r);
  const std::size_t tb = tile_blocks(r);
  parallel_for(panel_count(f), threads, [&](std::size_t panel) {
    const std::size_t i0 = panel * pb;
    const std::size_t i1 = std::min(f.m, i0 + pb);
    const std::size_t pw = (i1 - i0) * r;  // panel width in columns
    std::vector<double> acc_re(pw * tb * r), acc_im(f.real ? 0 : pw * tb * r);
    std::vector<double> xr(r * r), xi(f.real ? 0 : r * r);
    for (std::size_t j0 = i0 + 1; j0 < f.m; j0 += tb) {
      const std::size_t j1 = std::min(f.m, j0 + tb);
      const std::size_t tw = (j1 - j0) * r;
      const std::size_t c0 = j0 * r;
      std::fill(acc_re.begin(), acc_re.begin() + pw * tw, 0.0);
      if (!f.real) std::fill(acc_im.begin(), acc_im.begin() + pw * tw, 0.0);
      for (std::size_t t = 0; t < n; ++t) {
        const double* __restrict row_re = f.re.data() + t * N;
        for (std::size_t a = 0; a < pw; ++a) {
          const double sr = row_re[i0 * r + a];
          double* __restrict out_re = acc_re.data() + a * tw;
          if (f.real) {
            if (sr == 0.0) continue;
            for (std::size_t c = 0; c < tw; ++c) out_re[c] += sr * row_re[c0 + c];
          } else {
            const double* __restrict row_im = f.im.data() + t * N;
            const double si = row_im[i0 * r + a];
            double* __restrict out_im = acc_im.data() + a * tw;
            // conj(s) * z
            for (std::size_t c = 0; c < tw; ++c) {
              out_re[c] += sr * row_re[c0 + c] + si * row_im[c0 + c];
              out_im[c] += sr * row_im[c0 + c] - si * row_re[c0 + c];
            }
          }
        }
      }
      for (std::size_t j = j0; j < j1; ++j) {
        for (std::size_t i = i0; i < std::min(i1, j); ++i) {
          for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < r; ++b) {
              const std::size_t at = ((i - i0) * r + a) * tw + (j - j0) * r + b;
              xr[a * r + b] = acc_re[at];
              if (!f.real) xi[a * r + b] = acc_im[at];
            }
          }
          visit(panel, i, j, std::span<const double>(xr), std::span<const double>(xi));
        }
      }
    }
  });
}

}  // namespace blockcoh::detail
