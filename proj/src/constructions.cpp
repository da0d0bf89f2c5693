#include "blockcoh/constructions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "blockcoh/detail/cross_gram.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/io.hpp"

namespace blockcoh {
namespace {

constexpr double kTol = 1e-8;

long long mod(long long a, long long p) {
  const long long r = a % p;
  return r < 0 ? r + p : r;
}

double d(std::size_t x) { return static_cast<double>(x); }

}  // namespace

bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

CMatrix steiner_pairs_etf(std::size_t v) {
  if (v < 3) throw DomainError("steiner_pairs_etf requires v >= 3");
  const std::size_t b = v * (v - 1) / 2;
  // incidence[j] = rows (pairs, lexicographic) containing point j, ascending
  std::vector<std::vector<std::size_t>> incidence(v);
  std::size_t row = 0;
  for (std::size_t a = 0; a < v; ++a)
    for (std::size_t c = a + 1; c < v; ++c, ++row) {
      incidence[a].push_back(row);
      incidence[c].push_back(row);
    }
  CMatrix out(b, v * v);
  const double scale = 1.0 / std::sqrt(d(v - 1));
  const auto vv = static_cast<long long>(v);
  for (std::size_t j = 0; j < v; ++j) {
    for (std::size_t c = 0; c < v; ++c) {
      // rows 1..v-1 of the unnormalised DFT; the all-ones row is dropped
      for (std::size_t l = 0; l + 1 < v; ++l) {
        const long long q = mod(static_cast<long long>((l + 1) * c), vv);
        out(incidence[j][l], j * v + c) = scale * unit_root(q, vv);
      }
    }
  }
  return out;
}

CMatrix harmonic_qr_etf(std::size_t p) {
  if (!is_prime(p) || p % 4 != 3) throw DomainError("harmonic_qr_etf requires a prime p = 3 mod 4");
  std::vector<std::size_t> residues;
  for (std::size_t x = 1; x < p; ++x) residues.push_back(x * x % p);
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
  const std::size_t k = residues.size();
  CMatrix out(k, p);
  const double scale = 1.0 / std::sqrt(d(k));
  const auto pp = static_cast<long long>(p);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < p; ++c)
      out(i, c) = scale * unit_root(mod(static_cast<long long>(residues[i] * c), pp), pp);
  return out;
}

CMatrix alltop_gabor(std::size_t p) {
  if (p < 5 || !is_prime(p)) throw DomainError("alltop_gabor requires a prime p >= 5");
  const auto pp = static_cast<long long>(p);
  CMatrix out(p, p * p);
  const double scale = 1.0 / std::sqrt(d(p));
  for (long long a = 0; a < pp; ++a) {
    for (long long b = 0; b < pp; ++b) {
      for (long long t = 0; t < pp; ++t) {
        const long long s = mod(t - a, pp);
        // + a^3 puts the t = 0 entry on the positive real axis
        const long long q = mod(s * s % pp * s + b * t + a * a % pp * a, pp);
        out(static_cast<std::size_t>(t), static_cast<std::size_t>(a * pp + b)) = scale * unit_root(q, pp);
      }
    }
  }
  return out;
}

CMatrix discrete_chirp(std::size_t p) {
  if (p < 3 || !is_prime(p)) throw DomainError("discrete_chirp requires an odd prime p");
  const auto pp = static_cast<long long>(p);
  CMatrix out(p, p * p);
  const double scale = 1.0 / std::sqrt(d(p));
  for (long long a = 0; a < pp; ++a)
    for (long long b = 0; b < pp; ++b)
      for (long long t = 0; t < pp; ++t)
        out(static_cast<std::size_t>(t), static_cast<std::size_t>(a * pp + b)) =
            scale * unit_root(mod(a * t % pp * t + b * t, pp), pp);
  return out;
}

CMatrix id_hadamard_union(unsigned k) {
  if (k < 1) throw DomainError("id_hadamard_union requires k >= 1");
  const CMatrix h = hadamard_sylvester(k);
  const std::size_t n = h.rows();
  CMatrix out(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = 1.0;
    for (std::size_t j = 0; j < n; ++j) out(i, n + j) = h(i, j);
  }
  return out;
}

bool verify_etf(const CMatrix& p) {
  const std::size_t n = p.rows(), m = p.cols();
  if (n == 0 || m <= n) return false;
  const CMatrix g = p.adjoint() * p;
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(g(i, i).real() - 1.0) > kTol) return false;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double a = std::abs(g(i, j));
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  if (hi - lo > kTol) return false;
  const CMatrix t = p * p.adjoint() - cplx(d(m) / d(n)) * CMatrix::identity(n);
  return frobenius_norm(t) < kTol;
}

bool verify_flat_union(const CMatrix& p) {
  const std::size_t n = p.rows();
  if (n == 0 || p.cols() % n != 0 || p.cols() / n < 2) return false;
  const std::size_t bases = p.cols() / n;
  for (std::size_t g = 0; g < bases; ++g)
    if (unitarity_defect(p.columns(g * n, n)) >= kTol) return false;
  const double target = 1.0 / std::sqrt(d(n));
  detail::SplitFrame f(p, n, p.is_real());
  std::vector<char> ok(detail::panel_count(f), 1);
  detail::for_each_cross_gram(f, 1,
                              [&](std::size_t panel, std::size_t, std::size_t,
                                  std::span<const double> xr, std::span<const double> xi) {
                                if (!ok[panel]) return;
                                for (std::size_t k = 0; k < xr.size(); ++k) {
                                  const double im = xi.empty() ? 0.0 : xi[k];
                                  if (std::abs(std::hypot(xr[k], im) - target) > kTol) {
                                    ok[panel] = 0;
                                    return;
                                  }
                                }
                              });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

BlockFrame kron_frame(const CMatrix& p, const CMatrix& q) {
  if (p.empty() || q.empty()) throw DimensionError("Kronecker factors must be nonempty");
  return BlockFrame::make(kronecker(p, q), q.cols());
}

namespace {
void require_unitary(const CMatrix& q) {
  if (q.rows() != q.cols() || unitarity_defect(q) > 1e-10)
    throw ValidationError("Kronecker factor Q must be a square unitary matrix");
}
}  // namespace

BlockFrame kron_construct1(const CMatrix& p, const CMatrix& q) {
  require_unitary(q);
  if (!verify_etf(p)) throw ValidationError("construction 1 needs P to be an equiangular tight frame");
  return kron_frame(p, q);
}

BlockFrame kron_construct2(const CMatrix& p, const CMatrix& q) {
  require_unitary(q);
  if (!verify_flat_union(p))
    throw ValidationError("construction 2 needs P to be a flat union of orthobases");
  return kron_frame(p, q);
}

CMatrix default_kron_factor(std::size_t r) {
  if (r == 0) throw DomainError("block width must be positive");
  if (std::has_single_bit(r)) return hadamard_sylvester(static_cast<unsigned>(std::countr_zero(r)));
  return dft_matrix(r);
}

std::string to_string(Family f) {
  switch (f) {
    case Family::steiner_pairs_etf: return "steiner";
    case Family::harmonic_qr_etf: return "harmonic";
    case Family::alltop_gabor: return "alltop";
    case Family::discrete_chirp: return "chirp";
    case Family::id_hadamard_union: return "id-hadamard";
    case Family::kerdock_real: return "kerdock";
    case Family::external_file: return "file";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::steiner_pairs_etf, Family::harmonic_qr_etf, Family::alltop_gabor,
                   Family::discrete_chirp, Family::id_hadamard_union, Family::kerdock_real,
                   Family::external_file})
    if (to_string(f) == s) return f;
  throw ValidationError("unknown family '" + s +
                        "' (expected steiner, harmonic, alltop, chirp, id-hadamard, kerdock, file)");
}

KronFactor parse_kron(const std::string& s) {
  KronFactor k;
  if (s.empty() || s == "none") return k;
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ValidationError("bad --kron '" + s + "'");
  const std::string kind = s.substr(0, colon), arg = s.substr(colon + 1);
  if (kind == "file") {
    k.kind = KronFactor::Kind::external;
    k.path = arg;
    return k;
  }
  std::size_t value = 0;
  try {
    std::size_t used = 0;
    value = std::stoul(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw ValidationError("bad --kron argument '" + arg + "'");
  }
  if (kind == "hadamard") {
    if (value > 16) throw ValidationError("hadamard:k requires k <= 16");
    k.kind = KronFactor::Kind::hadamard;
  } else if (kind == "dft") {
    if (value < 1) throw ValidationError("dft:r requires r >= 1");
    k.kind = KronFactor::Kind::dft;
  } else if (kind == "r") {
    if (value < 1) throw ValidationError("r:<r> requires r >= 1");
    k.kind = KronFactor::Kind::default_for_r;
  } else {
    throw ValidationError("bad --kron kind '" + kind + "' (none, hadamard:k, dft:r, r:r, file:path)");
  }
  k.param = value;
  return k;
}

std::string to_string(const KronFactor& k) {
  switch (k.kind) {
    case KronFactor::Kind::none: return "none";
    case KronFactor::Kind::hadamard: return "hadamard:" + std::to_string(k.param);
    case KronFactor::Kind::dft: return "dft:" + std::to_string(k.param);
    case KronFactor::Kind::default_for_r: return "r:" + std::to_string(k.param);
    case KronFactor::Kind::external: return "file:" + k.path;
  }
  return "none";
}

namespace {
CMatrix kron_matrix(const KronFactor& k) {
  switch (k.kind) {
    case KronFactor::Kind::none: return CMatrix::identity(1);
    case KronFactor::Kind::hadamard: return hadamard_sylvester(static_cast<unsigned>(k.param));
    case KronFactor::Kind::dft: return dft_matrix(k.param);
    case KronFactor::Kind::default_for_r: return default_kron_factor(k.param);
    case KronFactor::Kind::external: return read_bfm_file(k.path).data;
  }
  return CMatrix::identity(1);
}
}  // namespace

void check_recipe(const FrameRecipe& rc) {
  const std::size_t x = rc.param;
  switch (rc.family) {
    case Family::steiner_pairs_etf:
      if (x < 3) throw ValidationError("steiner needs --v >= 3");
      break;
    case Family::harmonic_qr_etf:
      if (!is_prime(x) || x % 4 != 3) throw ValidationError("harmonic needs a prime --p with p = 3 mod 4");
      break;
    case Family::alltop_gabor:
      if (x < 5 || !is_prime(x)) throw ValidationError("alltop needs a prime --p >= 5");
      break;
    case Family::discrete_chirp:
      if (x < 3 || !is_prime(x)) throw ValidationError("chirp needs an odd prime --p");
      break;
    case Family::id_hadamard_union:
      if (x < 1 || x > 16) throw ValidationError("id-hadamard needs 1 <= --k <= 16");
      break;
    case Family::kerdock_real:
      if (rc.path.empty() && (x < 4 || x > 8 || x % 2 != 0))
        throw ValidationError("kerdock needs an even --k in [4, 8], or --set <file> with an external Kerdock set");
      break;
    case Family::external_file:
      if (rc.path.empty()) throw ValidationError("file family needs --path <frame.bfm>");
      break;
  }
}

CMatrix recipe_base(const FrameRecipe& rc) {
  check_recipe(rc);
  switch (rc.family) {
    case Family::steiner_pairs_etf: return steiner_pairs_etf(rc.param);
    case Family::harmonic_qr_etf: return harmonic_qr_etf(rc.param);
    case Family::alltop_gabor: return alltop_gabor(rc.param);
    case Family::discrete_chirp: return discrete_chirp(rc.param);
    case Family::id_hadamard_union: return id_hadamard_union(static_cast<unsigned>(rc.param));
    case Family::kerdock_real: {
      if (rc.path.empty()) return kerdock_real(static_cast<unsigned>(rc.param));
      const auto set = read_kerdock_set(rc.path);
      if (!verify_kerdock_set(set)) throw ValidationError("external Kerdock set has a singular difference");
      CMatrix p = kerdock_from_set(set, std::vector<int>(set.size(), 1));
      if (!verify_flat_union(p)) throw ValidationError("external Kerdock set does not give a flat union");
      return p;
    }
    case Family::external_file: return read_bfm_file(rc.path).data;
  }
  throw ValidationError("unknown family");
}

BlockFrame build(const FrameRecipe& rc) {
  if (rc.family == Family::external_file && rc.kron.kind == KronFactor::Kind::none) {
    check_recipe(rc);
    BfmFile f = read_bfm_file(rc.path);
    return BlockFrame::make(std::move(f.data), f.r, f.field);
  }
  const CMatrix p = recipe_base(rc);
  const CMatrix q = kron_matrix(rc.kron);
  switch (rc.family) {
    case Family::steiner_pairs_etf:
    case Family::harmonic_qr_etf: return kron_construct1(p, q);
    case Family::alltop_gabor:
    case Family::discrete_chirp:
    case Family::id_hadamard_union:
    case Family::kerdock_real: return kron_construct2(p, q);
    case Family::external_file: return kron_frame(p, q);
  }
  throw ValidationError("unknown family");
}

}  // namespace blockcoh
