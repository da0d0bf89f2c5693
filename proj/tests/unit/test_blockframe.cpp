#include <doctest.h>

#include <cmath>

#include "blockcoh/blockframe.hpp"
#include "blockcoh/bounds.hpp"
#include "blockcoh/constructions.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/randomgrass.hpp"
#include "helpers.hpp"

using namespace blockcoh;
using namespace testutil;

namespace {

// m random r-planes in C^n (or R^n), orthonormalized per block.
BlockFrame random_frame(std::size_t n, std::size_t r, std::size_t m, CounterRng& rng, bool real) {
  CMatrix data(n, m * r);
  for (std::size_t i = 0; i < m; ++i) {
    const CMatrix u = orthonormalize(random_matrix(n, r, rng, real));
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t b = 0; b < r; ++b) data(t, i * r + b) = u(t, b);
  }
  return BlockFrame::make(std::move(data), r);
}

// Direct definitions through CMatrix products and Eigen's SVD.
double naive_mu(const BlockFrame& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.m(); ++i)
    for (std::size_t j = 0; j < a.m(); ++j)
      if (i != j) best = std::max(best, eigen_spectral_norm(a.block(i).adjoint() * a.block(j)));
  return best;
}

double naive_nu(const BlockFrame& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.m(); ++i) {
    CMatrix s(a.r(), a.r());
    for (std::size_t j = 0; j < a.m(); ++j)
      if (j != i) s = s + a.block(i).adjoint() * a.block(j);
    best = std::max(best, eigen_spectral_norm(s));
  }
  return best / static_cast<double>(a.m() - 1);
}

double naive_nu1(const CMatrix& p) {
  double best = 0.0;
  for (std::size_t i = 0; i < p.cols(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < p.cols(); ++j) {
      if (j == i) continue;
      for (std::size_t t = 0; t < p.rows(); ++t) s += std::conj(p(t, i)) * p(t, j);
    }
    best = std::max(best, std::abs(s));
  }
  return best / static_cast<double>(p.cols() - 1);
}

BlockFrame block_diagonal(std::size_t n, std::size_t r) {
  return BlockFrame::make(CMatrix::identity(n), r);
}

}  // namespace

TEST_CASE("mu and nu match their definitions on random frames") {
  CounterRng rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t r = 1 + rng.below(4);
    const std::size_t n = r + 1 + rng.below(8);
    const std::size_t m = n / r + 1 + rng.below(20);
    const bool real = trial % 3 == 0;
    const BlockFrame a = random_frame(n, r, m, rng, real);
    CHECK(std::abs(mu(a) - naive_mu(a)) < 1e-10);
    CHECK(std::abs(nu(a) - naive_nu(a)) < 1e-10);
    const GramMap g = gram_map(a);
    CHECK(g.max_off_diagonal() == doctest::Approx(mu(a)).epsilon(1e-14));
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(g(i, i) == 1.0);
      for (std::size_t j = 0; j < m; ++j) CHECK(g(i, j) == g(j, i));
    }
    CHECK(mu(a) >= 0.0);
    CHECK(mu(a) <= 1.0 + 1e-12);
  }
}

TEST_CASE("mu pruning is exact for wide blocks") {
  CounterRng rng(22);
  for (std::size_t r : {3u, 5u, 10u}) {
    const BlockFrame a = random_frame(3 * r, r, 12, rng, true);
    CHECK(mu(a) == doctest::Approx(gram_map(a).max_off_diagonal()).epsilon(1e-13));
    CHECK(mu(a, 3) == mu(a));
  }
}

TEST_CASE("results do not depend on the worker count") {
  CounterRng rng(23);
  const BlockFrame a = random_frame(10, 2, 60, rng, false);
  CHECK(mu(a, 1) == mu(a, 4));
  CHECK(gram_map(a, 1) == gram_map(a, 5));
  const CoherenceReport r1 = analyze(a, 1), r4 = analyze(a, 4);
  CHECK(r1.mu == r4.mu);
  CHECK(r1.gram_map == r4.gram_map);
  CHECK(r1.equi_isoclinic == r4.equi_isoclinic);
}

TEST_CASE("orthogonal blocks have zero coherence") {
  const BlockFrame a = block_diagonal(6, 2);
  CHECK(mu(a) == 0.0);
  CHECK(nu(a) == 0.0);
  const GramMap g = gram_map(a);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(g(i, j) == (i == j ? 1.0 : 0.0));
  // A single block cannot form a frame, so mu is never asked about m = 1.
  CHECK_THROWS_AS(BlockFrame::make(CMatrix::identity(3), 3), ValidationError);
}

TEST_CASE("steiner frame coherence by exhaustive pairs") {
  const BlockFrame a = kron_construct1(steiner_pairs_etf(4), hadamard_sylvester(1));
  REQUIRE(a.n() == 12);
  REQUIRE(a.m() == 16);
  REQUIRE(a.r() == 2);
  CHECK(std::abs(mu(a) - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(naive_mu(a) - std::sqrt(20.0 / 180.0)) < 1e-12);
  const FrameValidation v = validate(a);
  CHECK(v.equi_isoclinic);
  CHECK(v.is_tight);
}

TEST_CASE("nu1") {
  CounterRng rng(24);
  CHECK(nu1(CMatrix::identity(4)) == 0.0);
  CMatrix twin(3, 2);
  twin(0, 0) = twin(0, 1) = 1.0;
  CHECK(std::abs(nu1(twin) - 1.0) < 1e-15);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix p = random_unit_columns(5, 9 + trial, rng);
    CHECK(std::abs(nu1(p) - naive_nu1(p)) < 1e-12);
  }
  CHECK_THROWS_AS(nu1(CMatrix::identity(1)), DomainError);
}

TEST_CASE("kronecker lemma: nu(P (x) Q) = nu1(P)") {
  CounterRng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix p = random_unit_columns(4, 10, rng);
    const CMatrix q = random_unitary(2 + trial % 3, rng);
    const BlockFrame a = kron_frame(p, q);
    CHECK(std::abs(nu(a) - nu1(p)) < 1e-10);
  }
}

TEST_CASE("global unitary and per-block right unitary invariance") {
  CounterRng rng(26);
  const BlockFrame a = random_frame(8, 2, 10, rng, false);
  const CMatrix u = random_unitary(8, rng);
  const BlockFrame ua = BlockFrame::make(u * a.data(), 2);
  CHECK(std::abs(mu(ua) - mu(a)) < 1e-10);
  CHECK(std::abs(nu(ua) - nu(a)) < 1e-10);

  CMatrix rotated = a.data();
  for (std::size_t i = 0; i < a.m(); ++i) {
    const CMatrix w = random_unitary(2, rng);
    const CMatrix bi = a.block(i) * w;
    for (std::size_t t = 0; t < 8; ++t)
      for (std::size_t b = 0; b < 2; ++b) rotated(t, i * 2 + b) = bi(t, b);
  }
  CHECK(std::abs(mu(BlockFrame::make(rotated, 2)) - mu(a)) < 1e-10);
}

TEST_CASE("distances") {
  CounterRng rng(27);
  const CMatrix a = orthonormalize(random_matrix(6, 2, rng));
  CHECK(chordal_distance(a, a) < 1e-7);
  CHECK(spectral_distance(a, a) < 1e-7);
  const CMatrix e = CMatrix::identity(4);
  CHECK(std::abs(chordal_distance(e.columns(0, 2), e.columns(2, 2)) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(spectral_distance(e.columns(0, 2), e.columns(2, 2)) - 1.0) < 1e-15);

  // One principal angle theta in R^2.
  for (double theta : {0.1, 0.7, 1.3, 2.5}) {
    CMatrix x(2, 1), y(2, 1);
    x(0, 0) = 1.0;
    y(0, 0) = std::cos(theta);
    y(1, 0) = std::sin(theta);
    CHECK(std::abs(chordal_distance(x, y) - std::abs(std::sin(theta))) < 1e-12);
  }
  CHECK_THROWS_AS(chordal_distance(e.columns(0, 2), e.columns(0, 1)), DimensionError);
}

TEST_CASE("pairwise identities on random pairs") {
  CounterRng rng(28);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = 1 + rng.below(4);
    const std::size_t n = r + 1 + rng.below(6);
    const CMatrix a = orthonormalize(random_matrix(n, r, rng));
    const CMatrix b = orthonormalize(random_matrix(n, r, rng));
    const CMatrix x = a.adjoint() * b;
    const double s = spectral_norm(x), f = frobenius_norm(x);
    const double ds = spectral_distance(a, b), dc = chordal_distance(a, b);
    CHECK(std::abs(ds * ds + s * s - 1.0) < 1e-12);
    CHECK(std::abs(dc * dc - (static_cast<double>(r) - f * f)) < 1e-12);
    CHECK(f * f <= static_cast<double>(r) * s * s + 1e-9);
  }
}

TEST_CASE("validation flags") {
  CounterRng rng(29);
  const CMatrix g = random_matrix(4, 8, rng);
  const FrameValidation v = validate(g, 2, Field::complex);
  CHECK_FALSE(v.unit_columns);
  CHECK_FALSE(v.valid());
  CHECK_THROWS_AS(BlockFrame::make(g, 2), ValidationError);

  const BlockFrame u = BlockFrame::make(id_hadamard_union(2), 1);
  CHECK(validate(u).is_union_of_orthobases);
  CHECK(validate(u).is_tight);

  // Real tag with complex data.
  const CMatrix c = random_unit_columns(3, 6, rng);
  CHECK_FALSE(validate(c, 1, Field::real).field_consistent);
  CHECK_THROWS_AS(BlockFrame::make(c, 1, Field::real), ValidationError);
  // Regime r < n <= m r.
  CHECK_FALSE(validate(CMatrix::identity(3).columns(0, 2), 1, Field::real).regime_ok);
  CHECK_THROWS_AS(BlockFrame::make(CMatrix::identity(3), 3), ValidationError);
}

TEST_CASE("universal lower bound holds on random frames") {
  CounterRng rng(30);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 1 + rng.below(3);
    const std::size_t n = r + 2 + rng.below(6);
    const std::size_t m = n / r + 2 + rng.below(10);
    const BlockFrame a = random_frame(n, r, m, rng, trial % 2 == 0);
    CHECK(mu(a) >= welch_block_lower({m, n, r, a.field()}) - 1e-9);
  }
}

TEST_CASE("analyze assembles bounds and flags") {
  const BlockFrame a = kron_construct2(id_hadamard_union(3), hadamard_sylvester(1));
  const CoherenceReport rep = analyze(a);
  CHECK(rep.n == 16);
  CHECK(rep.m == 16);
  CHECK(rep.r == 2);
  CHECK(std::abs(rep.mu - std::sqrt(2.0 / 16.0)) < 1e-12);
  CHECK(rep.is_union_of_orthobases);
  REQUIRE(rep.orthobases_lower.has_value());
  CHECK(rep.mu >= *rep.orthobases_lower - 1e-9);
  CHECK(rep.mu >= rep.welch_block_lower - 1e-9);
  CHECK_FALSE(rep.equi_isoclinic);  // blocks inside one basis are orthogonal
}
