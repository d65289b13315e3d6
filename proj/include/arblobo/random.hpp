#pragma once

#include <array>
#include <cstdint>

namespace arblobo {

/// One Philox4x32-10 block: 128 output bits for a 128-bit counter and 64-bit key.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer, used to derive child stream ids.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based random stream.
///
/// The seed is the Philox key, the stream id occupies the upper half of the
/// counter and the draw index the lower half, so two streams with the same
/// (seed, stream_id) produce identical draws and streams with different ids
/// share no state. The stream is a plain value: copying it forks an
/// independent replay of the same sequence.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  /// Number of 128-bit blocks consumed so far.
  std::uint64_t blocks_used() const { return block_; }

  /// Independent child stream keyed by `index`.
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Gamma(shape, 1); shape > 0.
  double gamma(double shape);
  double chi_square(double dof);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace arblobo
