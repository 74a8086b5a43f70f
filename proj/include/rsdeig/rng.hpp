#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rsdeig {

// SplitMix64 stream: state advances by the golden-ratio increment and each
// output is the standard SplitMix64 finalizer. Integer output is identical on
// every platform for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // Uniform on (0, 1]; 53 random bits.
  double uniform_open0();
  // Standard normal via Box-Muller; the sine branch is cached for the next call.
  double normal();

  std::uint64_t seed_state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Mixes a base seed with a stream index (trial, table cell, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

std::vector<double> gaussian_vector(Rng& rng, std::size_t n);

}  // namespace rsdeig
