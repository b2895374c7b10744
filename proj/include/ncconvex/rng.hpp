#pragma once

#include <complex>
#include <cstdint>

namespace ncconvex {

// Counter-based generator (splitmix64 core). A (seed, stream) pair fully
// determines the sequence, independent of call interleaving elsewhere, so
// parallel per-trial streams replay bit-for-bit.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_uniform();  // [0, 1)
  double next_gaussian();
  std::complex<double> next_complex_gaussian();  // E|z|^2 = 1

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ncconvex
