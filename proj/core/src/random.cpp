#include "abflow/numerics/random.hpp"

#include "abflow/types.hpp"

#include <cmath>

namespace abflow::numerics {

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  key_ = mix64(seed ^ mix64(stream_id + 0x632be59bd9b4e019ULL));
  // Odd per-stream increment so streams walk different Weyl sequences.
  gamma_ = mix64(key_ ^ kGolden) | 1ULL;
}

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * gamma_);
}

double RandomStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = kTwoPi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<double> normal_variates(RandomStream& stream, std::size_t count) {
  std::vector<double> out(count);
  for (auto& z : out) z = stream.normal();
  return out;
}

std::uint64_t derive_stream_id(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed + kGolden) ^ (index * 0xd1b54a32d192ed03ULL));
}

}  // namespace abflow::numerics
