#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "blockcoh/bounds.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/randomgrass.hpp"
#include "blockcoh/rng.hpp"
#include "blockcoh/special.hpp"

using namespace blockcoh;

TEST_CASE("log gamma against std::lgamma and Boost") {
  for (double x : {1e-6, 0.01, 0.3, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 55.5, 400.0, 5000.0}) {
    const double ref = boost::math::lgamma(x);
    CHECK(std::abs(log_gamma(x) - ref) < 1e-13 * std::max(1.0, std::abs(ref)));
    CHECK(std::abs(log_gamma(x) - std::lgamma(x)) < 1e-12 * std::max(1.0, std::abs(ref)));
  }
  CHECK(std::abs(log_gamma(1.0)) < 1e-15);
  CHECK(std::abs(log_gamma(2.0)) < 1e-15);
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.0), DomainError);
}

TEST_CASE("log beta against Boost and the gamma identity") {
  CounterRng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = 0.05 + 80.0 * rng.uniform(), q = 0.05 + 80.0 * rng.uniform();
    const double ref = std::log(boost::math::beta(p, q));
    CHECK(std::abs(log_beta(p, q) - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
    CHECK(std::abs(log_beta(p, q) - (log_gamma(p) + log_gamma(q) - log_gamma(p + q))) < 1e-10);
  }
  CHECK(log_beta(2.0, 3.0) == doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-14));
}

TEST_CASE("beta function limit tends to minus the entropy") {
  const double rho = 0.3;
  double prev_err = 1.0;
  for (double total : {250.0, 1000.0, 4000.0}) {
    const double err = std::abs(log_beta(rho * total, (1.0 - rho) * total) / total + shannon_entropy(rho));
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 5e-3);
}

TEST_CASE("regularized incomplete beta") {
  for (double x : {0.0, 0.1, 0.5, 0.77, 1.0}) CHECK(std::abs(reg_inc_beta(x, 1.0, 1.0) - x) < 1e-15);
  CounterRng rng(32);
  for (int trial = 0; trial < 400; ++trial) {
    const double p = 0.1 + 60.0 * rng.uniform(), q = 0.1 + 60.0 * rng.uniform();
    const double x = rng.uniform();
    const double ref = boost::math::ibeta(p, q, x);
    const double got = reg_inc_beta(x, p, q);
    CHECK(std::abs(got - ref) <= 1e-12 * ref + 1e-300);
    CHECK(std::abs(got + reg_inc_beta(1.0 - x, q, p) - 1.0) < 1e-12);
    if (ref > 1e-300) CHECK(std::abs(log_reg_inc_beta(x, p, q) - std::log(ref)) < 1e-11);
  }
  // Deep tail stays finite in log space.
  const double lr = log_reg_inc_beta(1e-3, 400.0, 2.0);
  CHECK(std::isfinite(lr));
  // I_x(a, 2) = x^a (1 + a (1 - x)); Boost underflows here.
  CHECK(std::abs(lr - (400.0 * std::log(1e-3) + std::log1p(400.0 * (1.0 - 1e-3)))) < 1e-12 * std::abs(lr));
  CHECK_THROWS_AS(reg_inc_beta(1.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1.0), DomainError);
}

TEST_CASE("shannon entropy") {
  CHECK(std::abs(shannon_entropy(0.5) - std::log(2.0)) < 1e-15);
  CHECK(shannon_entropy(0.2) == doctest::Approx(shannon_entropy(0.8)).epsilon(1e-15));
  CHECK_THROWS_AS(shannon_entropy(0.0), DomainError);
}

TEST_CASE("welch block bound") {
  CHECK(std::abs(welch_block_lower({16, 12, 2}) - 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(welch_block_lower({16, 6, 1}) - 1.0 / 3.0) < 1e-15);
  const double w = welch_block_lower({2048, 128, 2});
  CHECK(std::abs(w - std::sqrt(3968.0 / 262016.0)) < 1e-15);
  CHECK(w == doctest::Approx(0.12306).epsilon(1e-4));
  CHECK(w < 0.125);
  CHECK_THROWS_AS(welch_block_lower({4, 8, 2}), DomainError);  // m r = n
  CHECK_THROWS_AS(welch_block_lower({1, 8, 9}), DomainError);
}

TEST_CASE("orthobases bound") {
  CHECK(orthobases_lower(128, 2) == 0.125);
  CHECK(std::abs(orthobases_lower(4, 2) - std::sqrt(0.5)) < 1e-15);
  CHECK_THROWS_AS(orthobases_lower(9, 2), DomainError);
  for (std::size_t m = 65; m < 5000; m += 97)
    CHECK(orthobases_lower(128, 2) > welch_block_lower({m, 128, 2}));
  CHECK(orthobases_lower(128, 2) - welch_block_lower({100000000, 128, 2}) < 1e-4);
}

TEST_CASE("rankin and spectral distance bounds") {
  CHECK(std::abs(rankin_chordal({16, 12, 2}) - std::sqrt(2.0 * 10.0 / 12.0 * 16.0 / 15.0)) < 1e-15);
  CHECK(std::abs(rankin_chordal({1000000000, 12, 2}) - rankin_chordal_tight(12, 2)) < 1e-8);
  // r = n/2, m = 2: sqrt(n/4 * 2).
  CHECK(std::abs(rankin_chordal({3, 8, 4}) - std::sqrt(8.0 / 4.0 * 3.0 / 2.0)) < 1e-15);
  CHECK(std::abs(rankin_chordal_tight(12, 2) - std::sqrt(20.0 / 12.0)) < 1e-15);

  CHECK(std::abs(spectral_distance_upper({16, 12, 2}) - std::sqrt(10.0 / 12.0 * 16.0 / 15.0)) < 1e-15);
  for (std::size_t m : {7u, 16u, 300u}) {
    const BoundInputs b{m, 12, 2};
    const double w = welch_block_lower(b);
    CHECK(std::abs(spectral_distance_upper(b) - std::sqrt(1.0 - w * w)) < 1e-14);
    CHECK(spectral_distance_upper(b) <= 1.0);
  }
  CHECK(spectral_distance_upper({7, 12, 2}) <= 1.0);
}

TEST_CASE("subspace count bounds") {
  CHECK(max_equiisoclinic(12, 2, Field::complex) == 141);
  CHECK(max_equiisoclinic(4, 2, Field::real) == 8);
  CHECK(max_equiisoclinic(5, 5, Field::real) == 1);
  CHECK(max_equiisoclinic(5, 5, Field::complex) == 1);
  CHECK(max_blocks_orthobases(12, Field::complex) == 286);
  CHECK(max_blocks_orthobases(2, Field::real) == 4);
  for (std::size_t n = 2; n < 200; ++n)
    CHECK(max_blocks_orthobases(n, Field::complex) >= max_blocks_orthobases(n, Field::real));
}

TEST_CASE("tail bound G") {
  CHECK(tail_bound_G(1.0, 40, 4) == 0.0);
  CHECK(tail_bound_G(0.999999, 40, 4) < 1e-20);
  const double prefactor = std::exp(0.5 * std::log(M_PI) + log_beta(3.5, 16.5) - 2.0 * log_beta(2.0, 18.0));
  CHECK(tail_bound_G(0.0, 40, 4) == doctest::Approx(prefactor).epsilon(1e-13));
  double prev = 2.0 * prefactor;
  for (double x = 0.05; x < 1.0; x += 0.05) {
    const double g = tail_bound_G(x, 40, 4);
    CHECK(g < prev);
    prev = g;
  }
  CHECK_THROWS_AS(tail_bound_G(0.5, 7, 4), DomainError);
  // Large n stays finite through log space.
  CHECK(std::isfinite(log_tail_bound_G(0.3, 10000, 50)));
}

TEST_CASE("tail bound dominates Monte-Carlo exceedance") {
  CounterRng rng(33);
  const std::size_t n = 40, r = 4, pairs = 100000;
  const std::vector<double> xs = {0.3, 0.5, 0.7};
  std::vector<std::size_t> hits(xs.size(), 0);
  double mean_f2 = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const CMatrix a = sample_subspace(n, r, rng), b = sample_subspace(n, r, rng);
    const CMatrix x = a.adjoint() * b;
    const double s = spectral_norm(x);
    const double f = frobenius_norm(x);
    mean_f2 += f * f;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (s * s >= xs[i]) ++hits[i];
  }
  mean_f2 /= static_cast<double>(pairs);
  CHECK(std::abs(mean_f2 - 0.4) < 0.02 * 0.4);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(static_cast<double>(hits[i]) / static_cast<double>(pairs) <= tail_bound_G(xs[i], n, r) * 1.05);
}

TEST_CASE("exponent psi") {
  CHECK(exponent_psi(2.0, 0.25) > 0.0);
  for (double beta : {0.05, 0.2, 0.4}) {
    double prev = exponent_psi(2.0, beta);
    for (double a = 2.01; a < 1.0 / beta; a += 0.01) {
      const double v = exponent_psi(a, beta);
      CHECK(v < prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(exponent_psi(1.5, 0.25), DomainError);
  CHECK_THROWS_AS(exponent_psi(4.0, 0.25), DomainError);
}

TEST_CASE("threshold solver") {
  const ThresholdSolution s = solve_a_hat(1e-4);
  CHECK(std::abs(s.a_hat - 5.357) < 0.01);
  CHECK(std::abs(s.residual) < 1e-10);
  CHECK(solve_a_hat(0.4999).a_hat < 2.05);
  CHECK(solve_a_hat(0.4999).a_hat < 1.0 / 0.4999);

  // Grid scan of the sign change of psi, step 1e-6.
  const double beta = 0.25;
  double a = 2.0, root = 0.0;
  while (a + 1e-6 < 1.0 / beta) {
    if (exponent_psi(a, beta) > 0.0 && exponent_psi(a + 1e-6, beta) <= 0.0) {
      root = a;
      break;
    }
    a += 1e-6;
  }
  CHECK(std::abs(solve_a_hat(beta).a_hat - root) <= 1e-6);

  double prev = 10.0;
  for (int i = 0; i < 50; ++i) {
    const double b = 0.01 + 0.48 * i / 49.0;
    const ThresholdSolution t = solve_a_hat(b);
    CHECK(t.a_hat < prev);
    CHECK(t.a_hat < 5.36);
    CHECK(t.a_hat >= 2.0);
    CHECK(t.a_hat < 1.0 / b);
    CHECK(std::abs(t.residual) < 1e-10);
    prev = t.a_hat;
  }
  CHECK_THROWS_AS(solve_a_hat(0.5), DomainError);
  CHECK_THROWS_AS(solve_a_hat(0.6), DomainError);
  CHECK_THROWS_AS(solve_a_hat(0.0), DomainError);
}
