#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace gpoly {

/// Philox-4x32-10 counter-based generator.
///
/// Output block i of stream (seed, id) is Philox_seed(i, id): a keyed
/// bijection of the 128-bit counter (block index, stream id). Any stream can be
/// reconstructed in isolation, which is what makes Monte Carlo trials
/// reproducible under any thread schedule. Single owner; not thread-safe.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Standard normal deviate via Marsaglia's polar method (pairs are cached).
  double normal();

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }
  /// Number of 128-bit blocks consumed so far.
  std::uint64_t blocks() const noexcept { return block_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  std::optional<double> spare_normal_;
};

inline RngStream stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return RngStream(master_seed, stream_id);
}

/// The raw Philox-4x32-10 block function, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Derives an independent master seed for a named sub-experiment.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view tag);

}  // namespace gpoly
