#include "rsdeig/rng.hpp"

#include <cmath>
#include <numbers>

#include "rsdeig/error.hpp"

namespace rsdeig {

namespace {

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return splitmix_finalize(state_);
}

double Rng::uniform_open0() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open0();
  const double u2 = uniform_open0();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix_finalize(seed ^ splitmix_finalize(stream + 0x632be59bd9b4e019ULL));
}

std::vector<double> gaussian_vector(Rng& rng, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "gaussian_vector needs n >= 1");
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

}  // namespace rsdeig
