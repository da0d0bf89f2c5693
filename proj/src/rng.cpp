#include "blockcoh/rng.hpp"

#include <cmath>
#include <numbers>

#include "blockcoh/errors.hpp"

namespace blockcoh {
namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kPathSalt = 0x632be59bd9b4e019ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t k = mix64(seed + kGamma);
  for (std::uint64_t p : path) k = mix64(k ^ mix64(p + kPathSalt));
  return k;
}

CounterRng CounterRng::substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return CounterRng(derive_key(seed, path));
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("CounterRng::below: bound must be positive");
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x < limit) return x % bound;
  }
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace blockcoh
