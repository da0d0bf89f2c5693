#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "blockcoh/blockframe.hpp"
#include "blockcoh/matrix.hpp"

namespace blockcoh {

/// b x v^2 ETF, b = v(v-1)/2, from the pairs design on v points.
CMatrix steiner_pairs_etf(std::size_t v);
/// (p-1)/2 x p harmonic ETF on the quadratic residues; p prime, p = 3 mod 4.
CMatrix harmonic_qr_etf(std::size_t p);
/// p x p^2 time-frequency shifts of the Alltop sequence; p prime >= 5.
CMatrix alltop_gabor(std::size_t p);
/// p x p^2 discrete chirps; p odd prime.
CMatrix discrete_chirp(std::size_t p);
/// 2^k x 2^(k+1) matrix [I | H].
CMatrix id_hadamard_union(unsigned k);

/// k x k binary symmetric matrix, row i packed into bits of rows[i] (bit j = entry (i, j)).
struct BinaryMatrix {
  std::size_t k = 0;
  std::vector<std::uint64_t> rows;
  bool operator==(const BinaryMatrix&) const = default;
};

/// Rank over GF(2).
std::size_t gf2_rank(const BinaryMatrix& a);

/// Algebraic Kerdock set of 2^(k-1) symmetric k x k matrices; k even, 4 <= k <= 8.
/// Also returns the per-basis signs used by kerdock_real.
std::vector<BinaryMatrix> kerdock_set(unsigned k, std::vector<int>* basis_signs = nullptr);
/// True when every pairwise difference has full rank.
bool verify_kerdock_set(const std::vector<BinaryMatrix>& set);

/// Union of orthobases h_{P,a}(x) = s_P n'^(-1/2) (-1)^(Q_P(x) + a.x), with
/// Q_P(x) = sum_{i<j} P_ij x_i x_j. Row x, column P * n' + a.
CMatrix kerdock_from_set(const std::vector<BinaryMatrix>& set, const std::vector<int>& basis_signs);
/// 2^k x 2^(2k-1) real Kerdock frame. Throws ValidationError when the
/// generated set or frame fails its checks.
CMatrix kerdock_real(unsigned k);

/// One matrix per line, each row as a hex word, rows separated by spaces.
std::vector<BinaryMatrix> read_kerdock_set(const std::string& path);
void write_kerdock_set(const std::string& path, const std::vector<BinaryMatrix>& set);

bool verify_etf(const CMatrix& p);
/// Each consecutive n' x n' group unitary and every cross-basis modulus n'^(-1/2).
bool verify_flat_union(const CMatrix& p);

/// Blocks p_i (x) Q, no hypothesis checks.
BlockFrame kron_frame(const CMatrix& p, const CMatrix& q);
/// P an ETF, Q unitary: meets the universal bound with equality.
BlockFrame kron_construct1(const CMatrix& p, const CMatrix& q);
/// P a flat union of orthobases, Q unitary: a union of orthobases at sqrt(r/n).
BlockFrame kron_construct2(const CMatrix& p, const CMatrix& q);

/// Hadamard when r is a power of two, DFT otherwise.
CMatrix default_kron_factor(std::size_t r);

bool is_prime(std::size_t p);

enum class Family {
  steiner_pairs_etf,
  harmonic_qr_etf,
  alltop_gabor,
  discrete_chirp,
  id_hadamard_union,
  kerdock_real,
  external_file
};

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct KronFactor {
  enum class Kind { none, hadamard, dft, default_for_r, external } kind = Kind::none;
  std::size_t param = 0;  // k for hadamard, size for dft / default_for_r
  std::string path;       // external unitary (BFM file)
};

/// "none", "hadamard:<k>", "dft:<r>", "r:<r>", "file:<path>".
KronFactor parse_kron(const std::string& s);
std::string to_string(const KronFactor& k);

struct FrameRecipe {
  Family family = Family::steiner_pairs_etf;
  std::size_t param = 0;      // v, p or k
  std::string path;           // external frame (BFM) or Kerdock set file
  KronFactor kron;
};

/// Throws ValidationError with an actionable message.
void check_recipe(const FrameRecipe& recipe);
/// Base matrix P for the recipe.
CMatrix recipe_base(const FrameRecipe& recipe);
/// Builds P (x) Q with the hypothesis checks matching the family.
BlockFrame build(const FrameRecipe& recipe);

}  // namespace blockcoh
