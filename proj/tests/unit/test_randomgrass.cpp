#include <doctest.h>

#include <cmath>

#include "blockcoh/bounds.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/randomgrass.hpp"
#include "helpers.hpp"

using namespace blockcoh;
using namespace testutil;

TEST_CASE("sample_subspace is orthonormal") {
  CounterRng rng(100);
  for (std::size_t n : {2u, 5u, 12u, 40u}) {
    for (std::size_t r = 1; r <= n; r += (n > 5 ? 3 : 1)) {
      const CMatrix u = sample_subspace(n, r, rng);
      CHECK(u.rows() == n);
      CHECK(u.cols() == r);
      CHECK(u.is_real());
      CHECK(frobenius_norm(u.adjoint() * u - CMatrix::identity(r)) < 1e-12);
    }
  }
  const CMatrix q = sample_subspace(6, 6, rng);
  CHECK(frobenius_norm(q * q.adjoint() - CMatrix::identity(6)) < 1e-12);
  CHECK_THROWS_AS(sample_subspace(3, 4, rng), DomainError);
  CHECK_THROWS_AS(sample_subspace(3, 0, rng), DomainError);
}

TEST_CASE("sampled bases carry no sign bias") {
  // Left-orthogonal invariance: x -> -x on any coordinate leaves the law unchanged,
  // so every entry has mean zero.
  CounterRng rng(103);
  const int draws = 4000;
  double first = 0.0, last = 0.0;
  for (int t = 0; t < draws; ++t) {
    const CMatrix u = sample_subspace(8, 2, rng);
    first += u(0, 0).real();
    last += u(7, 1).real();
  }
  const double sigma = std::sqrt(1.0 / 8.0 / draws);
  CHECK(std::abs(first / draws) < 4.0 * sigma);
  CHECK(std::abs(last / draws) < 4.0 * sigma);
}

TEST_CASE("cross-Grams of random planes are contractions") {
  CounterRng rng(101);
  for (int t = 0; t < 200; ++t) {
    const CMatrix a = sample_subspace(4, 2, rng), b = sample_subspace(4, 2, rng);
    CHECK(spectral_norm(a.adjoint() * b) <= 1.0 + 1e-12);
  }
}

TEST_CASE("mean squared Frobenius cross-Gram approaches r^2/n") {
  CounterRng rng(102);
  const std::size_t n = 40, r = 4, pairs = 100000;
  double sum = 0.0;
  for (std::size_t t = 0; t < pairs; ++t) {
    const CMatrix a = sample_subspace(n, r, rng), b = sample_subspace(n, r, rng);
    const double f = frobenius_norm(a.adjoint() * b);
    sum += f * f;
  }
  const double mean = sum / static_cast<double>(pairs);
  CHECK(std::abs(mean - 0.4) < 0.02 * 0.4);
}

TEST_CASE("sample_block_frame determinism") {
  const RandomFrameSpec spec{20, 2, 25, 7, 3};
  const BlockFrame a = sample_block_frame(spec);
  const BlockFrame b = sample_block_frame(spec);
  CHECK(a.data() == b.data());
  CHECK(a.field() == Field::real);
  CHECK(validate(a).block_orthonormal);
  RandomFrameSpec other = spec;
  other.trial = 4;
  CHECK_FALSE(sample_block_frame(other).data() == a.data());
  // Block i depends only on (seed, trial, i), so a larger frame extends a smaller one.
  RandomFrameSpec longer = spec;
  longer.m = 30;
  const BlockFrame c = sample_block_frame(longer);
  CHECK(c.data().columns(0, 50) == a.data());
  CHECK(mu(a) < 1.0);
}

TEST_CASE("default block count") {
  CHECK(default_block_count(200, 10, 400) == 400);
  CHECK(default_block_count(200, 20, 400) == 100);
  CHECK(default_block_count(200, 90, 400) == 4);
  CHECK(default_block_count(200, 90, 3) == 3);
  CHECK(default_block_count(10, 9, 400) == 2);
}

TEST_CASE("empirical mu curve at small scale") {
  const std::vector<std::size_t> grid = {4, 6, 8, 10, 12};
  const auto rows = empirical_mu_curve(40, grid, 60, 6, 11);
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    CHECK(row.r == grid[i]);
    CHECK(row.beta == doctest::Approx(grid[i] / 40.0));
    CHECK(row.mean_mu <= row.max_mu);
    CHECK(row.max_mu < 1.0);
    CHECK(row.theory_mu == doctest::Approx(std::sqrt(solve_a_hat(row.beta).a_hat * row.beta)));
  }
  CHECK(empirical_mu_curve(40, grid, 60, 6, 11, 3) == rows);
  CHECK_THROWS_AS(empirical_mu_curve(40, {20}, 60, 2, 1), DomainError);
}

TEST_CASE("single trial with two blocks is one pairwise norm") {
  const auto rows = empirical_mu_curve(30, {5}, 2, 1, 9);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].m == 2);
  CounterRng r0 = CounterRng::substream(derive_key(9, {5}), {0, 0});
  CounterRng r1 = CounterRng::substream(derive_key(9, {5}), {0, 1});
  const CMatrix a0 = sample_subspace(30, 5, r0), a1 = sample_subspace(30, 5, r1);
  CHECK(rows[0].mean_mu == doctest::Approx(eigen_spectral_norm(a0.adjoint() * a1)).epsilon(1e-12));
}

TEST_CASE("near beta = 1/2 mu approaches one") {
  const auto rows = empirical_mu_curve(12, {5}, 36, 10, 5);
  CHECK(rows[0].mean_mu > 0.9);
}
