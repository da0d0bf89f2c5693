#include "blockcoh/blockframe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blockcoh/bounds.hpp"
#include "blockcoh/detail/cross_gram.hpp"
#include "blockcoh/detail/small_eig.hpp"
#include "blockcoh/errors.hpp"

namespace blockcoh {
namespace {

using detail::SplitFrame;

constexpr double kStructTol = 1e-8;
constexpr double kIsoclinicTol = 1e-6;

// Per-panel pair statistics; reduced in panel order.
struct PanelStats {
  double max_sigma = 0.0;
  double min_sigma = std::numeric_limits<double>::infinity();
  double max_sigma_seen = 0.0;  // only maintained while `isoclinic` holds
  bool isoclinic = true;
};

struct PairScan {
  double mu = 0.0;
  bool equi_isoclinic = false;
};

// Largest and smallest squared singular values of an r x r cross-Gram.
void sq_singular_range(std::span<const double> xr, std::span<const double> xi, std::size_t r,
                       std::vector<double>& hr, std::vector<double>& hi, double& lo, double& hi_out) {
  if (r == 1) {
    lo = hi_out = xr[0] * xr[0] + (xi.empty() ? 0.0 : xi[0] * xi[0]);
    return;
  }
  detail::form_cross_hermitian(xr, xi, r, hr, hi);
  if (r == 2) {
    const double a = hr[0], c = hr[3];
    const double b2 = hr[1] * hr[1] + (hi.empty() ? 0.0 : hi[1] * hi[1]);
    const double mid = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b2);
    lo = mid - rad;
    hi_out = mid + rad;
    return;
  }
  const auto ev = detail::hermitian_all_eigenvalues(hr, hi, r);
  lo = ev.front();
  hi_out = ev.back();
}

double sigma_of(double lambda) { return std::sqrt(std::max(lambda, 0.0)); }

// One sweep over all pairs: optional gram map, mu and the equi-isoclinic test.
PairScan scan_pairs(const SplitFrame& f, unsigned threads, GramMap* map) {
  const std::size_t panels = detail::panel_count(f);
  std::vector<PanelStats> stats(panels);
  std::vector<std::vector<double>> hr(panels), hi(panels);
  detail::for_each_cross_gram(
      f, threads,
      [&](std::size_t p, std::size_t i, std::size_t j, std::span<const double> xr,
          std::span<const double> xi) {
        PanelStats& s = stats[p];
        double sigma;
        if (s.isoclinic) {
          double lo, up;
          sq_singular_range(xr, xi, f.r, hr[p], hi[p], lo, up);
          sigma = sigma_of(up);
          const double smin = sigma_of(lo);
          s.min_sigma = std::min(s.min_sigma, smin);
          s.max_sigma_seen = std::max(s.max_sigma_seen, sigma);
          if (sigma - smin > kIsoclinicTol || s.max_sigma_seen - s.min_sigma > kIsoclinicTol)
            s.isoclinic = false;
        } else {
          sigma = sigma_of(detail::cross_gram_max_sq_singular(xr, xi, f.r, hr[p], hi[p]));
        }
        s.max_sigma = std::max(s.max_sigma, sigma);
        if (map) {
          map->values[i * f.m + j] = sigma;
          map->values[j * f.m + i] = sigma;
        }
      });
  PairScan out;
  double gmin = std::numeric_limits<double>::infinity(), gmax = 0.0;
  bool iso = f.m >= 2;
  for (const auto& s : stats) {
    out.mu = std::max(out.mu, s.max_sigma);
    iso = iso && s.isoclinic;
    if (s.isoclinic && s.min_sigma <= s.max_sigma_seen) {
      gmin = std::min(gmin, s.min_sigma);
      gmax = std::max(gmax, s.max_sigma_seen);
    }
  }
  out.equi_isoclinic = iso && (gmax - gmin <= kIsoclinicTol || gmin > gmax);
  return out;
}

// mu only: prune pairs whose bound (sum lambda^2)^(1/2), then (sum lambda^4)^(1/4),
// cannot beat the panel's running maximum.
double scan_mu(const SplitFrame& f, unsigned threads) {
  const std::size_t panels = detail::panel_count(f);
  const std::size_t r = f.r;
  std::vector<double> best(panels, 0.0);
  std::vector<std::vector<double>> hr(panels), hi(panels), sq(panels);
  detail::for_each_cross_gram(
      f, threads,
      [&](std::size_t p, std::size_t, std::size_t, std::span<const double> xr,
          std::span<const double> xi) {
        double lambda;
        if (r <= 2) {
          lambda = detail::cross_gram_max_sq_singular(xr, xi, r, hr[p], hi[p]);
        } else {
          detail::form_cross_hermitian(xr, xi, r, hr[p], hi[p]);
          const auto& H = hr[p];
          const auto& Hi = hi[p];
          const double b = best[p] * best[p];
          double fro2 = 0.0;
          for (std::size_t k = 0; k < r * r; ++k)
            fro2 += H[k] * H[k] + (Hi.empty() ? 0.0 : Hi[k] * Hi[k]);
          if (fro2 <= b * b) return;
          // tr(H^4) = ||H^2||_F^2
          double h4 = 0.0;
          for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t c = 0; c < r; ++c) {
              double zr = 0.0, zi = 0.0;
              for (std::size_t k = 0; k < r; ++k) {
                const double ar = H[a * r + k], br = H[k * r + c];
                const double ai = Hi.empty() ? 0.0 : Hi[a * r + k];
                const double bi = Hi.empty() ? 0.0 : Hi[k * r + c];
                zr += ar * br - ai * bi;
                zi += ar * bi + ai * br;
              }
              h4 += zr * zr + zi * zi;
            }
          }
          if (h4 <= b * b * b * b) return;
          lambda = detail::hermitian_max_eigenvalue(H, Hi, r);
        }
        best[p] = std::max(best[p], sigma_of(lambda));
      });
  double out = 0.0;
  for (double b : best) out = std::max(out, b);
  return out;
}

// (1/(m-1)) max_i ||A_i* (sum_{j<i} A_j + sum_{j>i} A_j)||_2. The two partial
// sums are accumulated ascending and descending respectively.
double nu_split(const SplitFrame& f) {
  const std::size_t n = f.n, r = f.r, m = f.m, N = f.cols;
  if (m < 2) throw DomainError("nu requires at least two blocks");
  const std::size_t bs = n * r;
  const bool real = f.real;
  std::vector<double> suf_re((m + 1) * bs, 0.0), suf_im(real ? 0 : (m + 1) * bs, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t b = 0; b < r; ++b) {
        const std::size_t k = t * r + b;
        suf_re[i * bs + k] = suf_re[(i + 1) * bs + k] + f.re[t * N + i * r + b];
        if (!real) suf_im[i * bs + k] = suf_im[(i + 1) * bs + k] + f.im[t * N + i * r + b];
      }
    }
  }
  std::vector<double> pre_re(bs, 0.0), pre_im(real ? 0 : bs, 0.0);
  std::vector<double> sr(r * r), si(real ? 0 : r * r), hr, hi;
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(sr.begin(), sr.end(), 0.0);
    std::fill(si.begin(), si.end(), 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t a = 0; a < r; ++a) {
        const double ar = f.re[t * N + i * r + a];
        const double ai = real ? 0.0 : f.im[t * N + i * r + a];
        for (std::size_t b = 0; b < r; ++b) {
          const std::size_t k = t * r + b;
          const double tr = pre_re[k] + suf_re[(i + 1) * bs + k];
          if (real) {
            sr[a * r + b] += ar * tr;
          } else {
            const double ti = pre_im[k] + suf_im[(i + 1) * bs + k];
            sr[a * r + b] += ar * tr + ai * ti;
            si[a * r + b] += ar * ti - ai * tr;
          }
        }
      }
    }
    best = std::max(best, sigma_of(detail::cross_gram_max_sq_singular(sr, si, r, hr, hi)));
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t b = 0; b < r; ++b) {
        pre_re[t * r + b] += f.re[t * N + i * r + b];
        if (!real) pre_im[t * r + b] += f.im[t * N + i * r + b];
      }
    }
  }
  return best / static_cast<double>(m - 1);
}

// `full` adds the tightness, orthobasis and pairwise checks on top of the
// structural ones a BlockFrame needs.
FrameValidation validate_impl(const CMatrix& data, std::size_t r, Field field, bool full,
                              const PairScan* scan, unsigned threads) {
  FrameValidation v;
  const std::size_t n = data.rows(), N = data.cols();
  v.shape_ok = r >= 1 && n >= 1 && N >= r && N % r == 0;
  if (!v.shape_ok) return v;
  const std::size_t m = N / r;
  v.regime_ok = r < n && n <= m * r;
  v.field_consistent = field == Field::complex || data.is_real();

  for (std::size_t c = 0; c < N; ++c) {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += std::norm(data(t, c));
    v.max_column_defect = std::max(v.max_column_defect, std::abs(std::sqrt(s) - 1.0));
  }
  v.unit_columns = v.max_column_defect < kStructTol;

  for (std::size_t i = 0; i < m; ++i) {
    double d2 = 0.0;
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) {
        cplx s = 0.0;
        for (std::size_t t = 0; t < n; ++t) s += std::conj(data(t, i * r + a)) * data(t, i * r + b);
        if (a == b) s -= 1.0;
        d2 += std::norm(s);
      }
    }
    v.max_block_defect = std::max(v.max_block_defect, std::sqrt(d2));
  }
  v.block_orthonormal = v.max_block_defect < kStructTol;
  if (!full) return v;

  // ||A A* - (mr/n) I||_F
  {
    const double scale = static_cast<double>(N) / static_cast<double>(n);
    double d2 = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      const auto ra = data.row(a);
      for (std::size_t b = a; b < n; ++b) {
        const auto rb = data.row(b);
        cplx s = 0.0;
        for (std::size_t c = 0; c < N; ++c) s += ra[c] * std::conj(rb[c]);
        if (a == b) s -= scale;
        d2 += (a == b ? 1.0 : 2.0) * std::norm(s);
      }
    }
    v.tightness_defect = std::sqrt(d2);
    v.is_tight = v.tightness_defect < kStructTol;
  }

  if (n % r == 0 && N % n == 0) {
    bool ok = true;
    for (std::size_t g = 0; ok && g < N / n; ++g)
      ok = unitarity_defect(data.columns(g * n, n)) < kStructTol;
    v.is_union_of_orthobases = ok;
  }

  if (m >= 2) {
    if (scan) {
      v.equi_isoclinic = scan->equi_isoclinic;
    } else {
      SplitFrame f(data, r, data.is_real());
      v.equi_isoclinic = scan_pairs(f, threads, nullptr).equi_isoclinic;
    }
  }
  return v;
}

}  // namespace

BlockFrame BlockFrame::make(CMatrix data, std::size_t r, std::optional<Field> field) {
  const Field f = field.value_or(field_of(data));
  if (!data.all_finite()) throw ValidationError("frame has non-finite entries");
  const FrameValidation v = validate_impl(data, r, f, false, nullptr, 1);
  if (!v.shape_ok) throw ValidationError("column count must be a positive multiple of r");
  if (!v.regime_ok) throw ValidationError("need r < n <= m r");
  if (!v.field_consistent) throw ValidationError("real field tag but nonzero imaginary parts");
  if (!v.unit_columns) throw ValidationError("columns are not unit norm");
  if (!v.block_orthonormal) throw ValidationError("block columns are not orthonormal");
  return BlockFrame(std::move(data), r, f);
}

FrameValidation validate(const CMatrix& data, std::size_t r, Field field) {
  return validate_impl(data, r, field, true, nullptr, 1);
}

FrameValidation validate(const BlockFrame& a) { return validate(a.data(), a.r(), a.field()); }

double GramMap::max_off_diagonal() const {
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) best = std::max(best, values[i * m + j]);
  return best;
}

double mu(const BlockFrame& a, unsigned threads) {
  if (a.m() < 2) throw DomainError("mu requires at least two blocks");
  SplitFrame f(a.data(), a.r(), a.data().is_real());
  return scan_mu(f, threads);
}

double nu(const BlockFrame& a) {
  SplitFrame f(a.data(), a.r(), a.data().is_real());
  return nu_split(f);
}

double nu1(const CMatrix& p) {
  if (p.cols() < 2) throw DomainError("nu1 requires at least two columns");
  SplitFrame f(p, 1, p.is_real());
  return nu_split(f);
}

GramMap gram_map(const BlockFrame& a, unsigned threads) {
  GramMap map;
  map.m = a.m();
  map.values.assign(map.m * map.m, 0.0);
  for (std::size_t i = 0; i < map.m; ++i) map.values[i * map.m + i] = 1.0;
  SplitFrame f(a.data(), a.r(), a.data().is_real());
  const std::size_t panels = detail::panel_count(f);
  std::vector<std::vector<double>> hr(panels), hi(panels);
  detail::for_each_cross_gram(f, threads,
                              [&](std::size_t p, std::size_t i, std::size_t j,
                                  std::span<const double> xr, std::span<const double> xi) {
                                const double s = sigma_of(
                                    detail::cross_gram_max_sq_singular(xr, xi, f.r, hr[p], hi[p]));
                                map.values[i * map.m + j] = s;
                                map.values[j * map.m + i] = s;
                              });
  return map;
}

namespace {
void check_pair(const CMatrix& ai, const CMatrix& aj) {
  if (ai.empty() || ai.rows() != aj.rows() || ai.cols() != aj.cols())
    throw DimensionError("blocks must be nonempty and share a shape");
}
}  // namespace

double chordal_distance(const CMatrix& ai, const CMatrix& aj) {
  check_pair(ai, aj);
  const double f = frobenius_norm(ai.adjoint() * aj);
  return std::sqrt(std::max(0.0, static_cast<double>(ai.cols()) - f * f));
}

double spectral_distance(const CMatrix& ai, const CMatrix& aj) {
  check_pair(ai, aj);
  const double s = spectral_norm(ai.adjoint() * aj);
  return std::sqrt(std::max(0.0, 1.0 - s * s));
}

CoherenceReport analyze(const BlockFrame& a, unsigned threads) {
  CoherenceReport rep;
  rep.n = a.n();
  rep.r = a.r();
  rep.m = a.m();
  rep.field = a.field();
  rep.gram_map.m = rep.m;
  rep.gram_map.values.assign(rep.m * rep.m, 0.0);
  for (std::size_t i = 0; i < rep.m; ++i) rep.gram_map.values[i * rep.m + i] = 1.0;

  SplitFrame f(a.data(), a.r(), a.data().is_real());
  const PairScan scan = scan_pairs(f, threads, &rep.gram_map);
  rep.mu = scan.mu;
  rep.nu = nu_split(f);
  rep.validation = validate_impl(a.data(), a.r(), a.field(), true, &scan, threads);
  rep.is_union_of_orthobases = rep.validation.is_union_of_orthobases;
  rep.equi_isoclinic = rep.validation.equi_isoclinic;

  const BoundInputs b{rep.m, rep.n, rep.r, rep.field};
  if (rep.m * rep.r > rep.n) {
    rep.welch_block_lower = welch_block_lower(b);
    rep.rankin_chordal = rankin_chordal(b);
    rep.spectral_distance_upper = spectral_distance_upper(b);
  } else {
    // m r = n: orthogonal blocks fit, so the coherence bounds are vacuous.
    const double mm = static_cast<double>(rep.m);
    rep.rankin_chordal = rankin_chordal_tight(rep.n, rep.r) * std::sqrt(mm / (mm - 1.0));
    rep.spectral_distance_upper = 1.0;
  }
  if (rep.n % rep.r == 0) rep.orthobases_lower = orthobases_lower(rep.n, rep.r);
  rep.max_equiisoclinic = max_equiisoclinic(rep.n, rep.r, rep.field);
  if (rep.n % rep.r == 0) rep.max_blocks_orthobases = max_blocks_orthobases(rep.n, rep.field);
  return rep;
}

}  // namespace blockcoh
