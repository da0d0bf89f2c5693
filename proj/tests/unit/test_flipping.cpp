#include <doctest.h>

#include <cmath>

#include "blockcoh/constructions.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/flipping.hpp"
#include "blockcoh/randomgrass.hpp"
#include "helpers.hpp"

using namespace blockcoh;
using namespace testutil;

namespace {

double sum_norm(const CMatrix& f, NormVariant v) {
  return v == NormVariant::spectral ? spectral_norm(f) : frobenius_norm(f);
}

}  // namespace

TEST_CASE("lemma2 bound") {
  CHECK(lemma2_bound(4) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lemma2_bound(2048) == doctest::Approx(0.02263).epsilon(1e-3));
  for (std::size_t m = 2; m < 200; ++m) CHECK(lemma2_bound(m + 1) < lemma2_bound(m));
  CHECK_THROWS_AS(lemma2_bound(1), DomainError);
}

TEST_CASE("thm14 minimal c") {
  const double c = thm14_min_c(2048, 128, 2);
  // Direct substitution of the displayed condition.
  auto lhs = [](double m, double n, double r) {
    return (m - 1.0) / (m - n / r) / std::log(m) * ((std::sqrt(m) + 1.0) / (m - 1.0));
  };
  auto holds = [&](double cc) { return lhs(2048, 128, 2) <= cc * cc * (2.0 / 128.0) * (2.0 / 128.0); };
  CHECK(c == doctest::Approx(64.0 * std::sqrt(lhs(2048, 128, 2))).epsilon(1e-14));
  CHECK(holds(c + 1e-9));
  CHECK_FALSE(holds(c - 1e-3));
  for (std::size_t m = 100; m < 5000; m += 100) CHECK(thm14_min_c(m + 100, 128, 2) < thm14_min_c(m, 128, 2));
  CHECK_THROWS_AS(thm14_min_c(64, 128, 2), DomainError);
  CHECK_THROWS_AS(thm14_min_c(2, 1, 1), DomainError);
}

TEST_CASE("norm variant names") {
  CHECK(norm_variant_from_string(to_string(NormVariant::frobenius)) == NormVariant::frobenius);
  CHECK(norm_variant_from_string("spectral") == NormVariant::spectral);
  CHECK_THROWS_AS(norm_variant_from_string("nuclear"), ValidationError);
}

TEST_CASE("flip hand trace: A2 = -A1 keeps both signs") {
  CMatrix d(2, 2);
  d(0, 0) = 1.0;
  d(0, 1) = -1.0;
  const BlockFrame a = BlockFrame::make(d, 1);
  const FlipResult res = flip(a);
  CHECK(res.signs == std::vector<int>{1, 1});
  CHECK(res.flipped.data() == a.data());
  CHECK(res.steps.size() == 1);
  CHECK(res.steps[0].plus == 0.0);
  CHECK(res.steps[0].minus == doctest::Approx(2.0));
}

TEST_CASE("flip tie keeps the unflipped sign") {
  // Orthogonal columns: both candidate sums have norm sqrt(2).
  const BlockFrame a = BlockFrame::make(CMatrix::identity(2), 1);
  CHECK(flip(a).signs == std::vector<int>{1, 1});
}

TEST_CASE("flip greedy property and gram preservation") {
  for (NormVariant v : {NormVariant::spectral, NormVariant::frobenius}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const std::size_t r = 1 + seed % 3;
      const BlockFrame a = sample_block_frame({16, r, 24, seed, 0});
      FlipConfig cfg;
      cfg.norm_variant = v;
      const FlipResult res = flip(a, cfg);
      CHECK(res.signs[0] == 1);
      CHECK(res.gram_preserved);
      CHECK(res.mu_after == res.mu_before);
      CHECK(std::abs(mu(res.flipped) - mu(a)) <= 1e-12);
      // Recompute F_k directly and check each greedy choice.
      CMatrix f = a.block(0);
      for (std::size_t k = 1; k < a.m(); ++k) {
        const CMatrix ak = a.block(k);
        const double plus = sum_norm(f + ak, v), minus = sum_norm(f - ak, v);
        CHECK(res.steps[k - 1].plus == doctest::Approx(plus).epsilon(1e-9));
        CHECK(res.steps[k - 1].minus == doctest::Approx(minus).epsilon(1e-9));
        f = res.signs[k] > 0 ? f + ak : f - ak;
        const double now = sum_norm(f, v);
        CHECK(now <= plus + 1e-9);
        CHECK(now <= minus + 1e-9);
        CHECK(std::min(std::abs(now - plus), std::abs(now - minus)) < 1e-9);
      }
      CHECK(res.final_sum_norm == doctest::Approx(sum_norm(f, v)).epsilon(1e-9));
      if (v == NormVariant::frobenius)
        CHECK(res.final_sum_norm * res.final_sum_norm <= static_cast<double>(a.m() * r) * (1 + 1e-12));
      CHECK(res.nu_after == nu(res.flipped));
      CHECK(res.within_lemma2 == (res.nu_after <= lemma2_bound(a.m())));
    }
  }
}

TEST_CASE("flip on complex frames preserves the gram map") {
  const BlockFrame a = kron_construct1(steiner_pairs_etf(4), dft_matrix(3));
  const FlipResult res = flip(a);
  CHECK(res.gram_preserved);
  CHECK(res.nu_after <= res.nu_before + 1e-15);
}

TEST_CASE("a one-block frame cannot be built, so flip never sees m < 2") {
  CHECK_THROWS_AS(BlockFrame::make(CMatrix(3, 1, {1.0, 0.0, 0.0}), 1), ValidationError);
}

TEST_CASE("apply_signs") {
  const BlockFrame a = sample_block_frame({8, 2, 5, 3, 0});
  const BlockFrame b = apply_signs(a, {1, -1, 1, -1, -1});
  CHECK(b.block(1) == -a.block(1));
  CHECK(b.block(2) == a.block(2));
  CHECK(gram_map(a) == gram_map(b));
  CHECK_THROWS_AS(apply_signs(a, {1, 1}), DimensionError);
}

TEST_CASE("random flip search") {
  const BlockFrame a = sample_block_frame({16, 2, 32, 21, 0});
  const FlipResult one = random_flip_search(a, 1, 5);
  CHECK(one.signs[0] == 1);
  CHECK(one.nu_after == nu(apply_signs(a, one.signs)));
  CHECK(one.gram_preserved);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const double best1 = random_flip_search(a, 1, s).nu_after;
    const double best64 = random_flip_search(a, 64, s).nu_after;
    CHECK(best64 <= best1);
  }
  CHECK(random_flip_search(a, 64, 3, 4).signs == random_flip_search(a, 64, 3, 1).signs);
  CHECK_THROWS_AS(random_flip_search(a, 0, 1), DomainError);
}

TEST_CASE("random flip search reaches the existence target") {
  const std::size_t n = 16, m = 32, r = 2;
  const double c = thm14_min_c(m, n, r);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const BlockFrame a = sample_block_frame({n, r, m, seed, 0});
    const FlipResult res = random_flip_search(a, 1024, seed, 4);
    const double target = c * res.mu_after * std::sqrt(r * std::log(double(m)) / n);
    if (res.nu_after <= target) ++hits;
  }
  CHECK(hits >= 8);
}
