#include "ncconvex/rng.hpp"

#include <cmath>

namespace ncconvex {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed + kGamma) ^ mix(stream * kGamma + 0x6A09E667F3BCC909ULL)) {}

std::uint64_t CounterRng::next_u64() {
  state_ += kGamma;
  return mix(state_);
}

double CounterRng::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = next_uniform();
  double u2 = next_uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> CounterRng::next_complex_gaussian() {
  const double re = next_gaussian();
  const double im = next_gaussian();
  return {re * 0.7071067811865475244, im * 0.7071067811865475244};
}

}  // namespace ncconvex
