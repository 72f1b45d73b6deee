#pragma once

#include <cstdint>
#include <vector>

namespace abflow::numerics {

/// Counter-based generator: the k-th draw is a pure function of
/// (seed, stream_id, k). Copies are independent and replay identically.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }
  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by Box-Muller; the second variate of each pair is kept
  /// for the following call.
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t gamma_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// `count` standard normals drawn from `stream` (which advances).
std::vector<double> normal_variates(RandomStream& stream, std::size_t count);

/// Stream id for a worker derived from a parent seed and an index.
std::uint64_t derive_stream_id(std::uint64_t seed, std::uint64_t index);

}  // namespace abflow::numerics
