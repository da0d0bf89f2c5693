#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "blockcoh/constructions.hpp"
#include "blockcoh/errors.hpp"

// Kerdock sets from GF(2^d), d = k - 1 odd. V = GF(2^d) + GF(2) with basis
// (alpha^t, 0), t < d, and (0, 1). For u in GF(2^d), w = sqrt(u):
//   B_u((x, e), (y, f)) = Tr(u x y) + Tr(w x) Tr(w y) + e Tr(w y) + f Tr(w x).
// Differences B_u + B_v are nondegenerate for u != v.

namespace blockcoh {
namespace {

std::uint32_t irreducible(unsigned d) {
  switch (d) {
    case 3: return 0b1011;          // x^3 + x + 1
    case 5: return 0b100101;        // x^5 + x^2 + 1
    case 7: return 0b10000011;      // x^7 + x + 1
    case 9: return 0x211;           // x^9 + x^4 + 1
    default: throw DomainError("no field polynomial for this degree");
  }
}

struct Gf2d {
  unsigned d;
  std::uint32_t poly;

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t acc = 0;
    while (b) {
      if (b & 1u) acc ^= a;
      b >>= 1;
      a <<= 1;
      if (a >> d) a ^= poly;
    }
    return acc;
  }
  std::uint32_t square(std::uint32_t a) const { return mul(a, a); }
  std::uint32_t sqrt(std::uint32_t a) const {
    // Frobenius has order d, so sqrt(a) = a^(2^(d-1)).
    for (unsigned i = 0; i + 1 < d; ++i) a = square(a);
    return a;
  }
  unsigned trace(std::uint32_t a) const {
    std::uint32_t t = 0, z = a;
    for (unsigned i = 0; i < d; ++i) {
      t ^= z;
      z = square(z);
    }
    return t & 1u;  // trace lies in GF(2)
  }
};

}  // namespace

std::size_t gf2_rank(const BinaryMatrix& a) {
  std::vector<std::uint64_t> rows = a.rows;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.k && rank < rows.size(); ++col) {
    const std::uint64_t bit = std::uint64_t{1} << col;
    std::size_t piv = rank;
    while (piv < rows.size() && !(rows[piv] & bit)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rank && (rows[i] & bit)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

std::vector<BinaryMatrix> kerdock_set(unsigned k, std::vector<int>* basis_signs) {
  if (k < 4 || k > 8 || k % 2 != 0) throw DomainError("kerdock_set requires an even k in [4, 8]");
  const Gf2d f{k - 1, irreducible(k - 1)};
  const std::uint32_t q = 1u << f.d;
  std::vector<BinaryMatrix> set;
  set.reserve(q);
  if (basis_signs) basis_signs->assign(q, 1);
  for (std::uint32_t u = 0; u < q; ++u) {
    const std::uint32_t w = f.sqrt(u);
    BinaryMatrix p{k, std::vector<std::uint64_t>(k, 0)};
    auto set_bit = [&](std::size_t i, std::size_t j) {
      p.rows[i] |= std::uint64_t{1} << j;
      p.rows[j] |= std::uint64_t{1} << i;
    };
    for (unsigned i = 0; i < f.d; ++i) {
      const std::uint32_t ei = 1u << i;
      const unsigned twi = f.trace(f.mul(w, ei));
      for (unsigned j = i; j < f.d; ++j) {
        const std::uint32_t ej = 1u << j;
        const unsigned b = f.trace(f.mul(u, f.mul(ei, ej))) ^ (twi & f.trace(f.mul(w, ej)));
        if (b) set_bit(i, j);
      }
      if (twi) set_bit(i, f.d);  // pairing (alpha^i, 0) with (0, 1)
    }
    set.push_back(std::move(p));
    // Signs make the columns sum to zero (Tr is balanced over the field).
    if (basis_signs) (*basis_signs)[u] = f.trace(u) ? -1 : 1;
  }
  return set;
}

bool verify_kerdock_set(const std::vector<BinaryMatrix>& set) {
  if (set.size() < 2) return false;
  const std::size_t k = set.front().k;
  for (const auto& p : set) {
    if (p.k != k || p.rows.size() != k) return false;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (((p.rows[i] >> j) & 1u) != ((p.rows[j] >> i) & 1u)) return false;
  }
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      BinaryMatrix diff{k, set[a].rows};
      for (std::size_t i = 0; i < k; ++i) diff.rows[i] ^= set[b].rows[i];
      if (gf2_rank(diff) != k) return false;
    }
  }
  return true;
}

CMatrix kerdock_from_set(const std::vector<BinaryMatrix>& set, const std::vector<int>& basis_signs) {
  if (set.empty()) throw DomainError("empty Kerdock set");
  if (basis_signs.size() != set.size()) throw DimensionError("one sign per Kerdock matrix");
  const std::size_t k = set.front().k;
  if (k == 0 || k > 20) throw DomainError("Kerdock matrices must have 1 <= k <= 20");
  const std::size_t n = std::size_t{1} << k;
  CMatrix out(n, set.size() * n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<unsigned> qform(n);
  for (std::size_t u = 0; u < set.size(); ++u) {
    const auto& p = set[u];
    for (std::size_t x = 0; x < n; ++x) {
      unsigned acc = 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (!((x >> i) & 1u)) continue;
        // strictly upper part of row i restricted to the support of x
        const std::uint64_t upper = p.rows[i] & ~((std::uint64_t{2} << i) - 1);
        acc ^= std::popcount(upper & x) & 1u;
      }
      qform[x] = acc;
    }
    const double s = scale * basis_signs[u];
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t a = 0; a < n; ++a) {
        const unsigned parity = qform[x] ^ (std::popcount(a & x) & 1u);
        out(x, u * n + a) = parity ? -s : s;
      }
  }
  return out;
}

CMatrix kerdock_real(unsigned k) {
  std::vector<int> signs;
  const auto set = kerdock_set(k, &signs);
  if (!verify_kerdock_set(set))
    throw ValidationError("generated Kerdock set failed the rank check; supply one with --set <file>");
  CMatrix p = kerdock_from_set(set, signs);
  if (!verify_flat_union(p))
    throw ValidationError("generated Kerdock frame is not a flat union; supply a set with --set <file>");
  return p;
}

std::vector<BinaryMatrix> read_kerdock_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open Kerdock set file '" + path + "'");
  std::vector<BinaryMatrix> set;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    BinaryMatrix p;
    std::string word;
    while (ls >> word) {
      std::size_t used = 0;
      std::uint64_t v = 0;
      try {
        v = std::stoull(word, &used, 16);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != word.size()) throw ParseError("line " + std::to_string(lineno) + ": bad hex row '" + word + "'");
      p.rows.push_back(v);
    }
    p.k = p.rows.size();
    if (p.k > 63) throw ParseError("line " + std::to_string(lineno) + ": matrix too large");
    for (auto v : p.rows)
      if (v >> p.k) throw ParseError("line " + std::to_string(lineno) + ": row has bits beyond k");
    if (!set.empty() && set.front().k != p.k)
      throw ParseError("line " + std::to_string(lineno) + ": inconsistent matrix size");
    set.push_back(std::move(p));
  }
  if (set.empty()) throw ParseError("Kerdock set file '" + path + "' is empty");
  return set;
}

void write_kerdock_set(const std::string& path, const std::vector<BinaryMatrix>& set) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  for (const auto& p : set) {
    for (std::size_t i = 0; i < p.rows.size(); ++i) out << (i ? " " : "") << std::hex << p.rows[i];
    out << std::dec << '\n';
  }
}

}  // namespace blockcoh
