#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace rbskm {

/// Counter-based random stream built on Philox4x32-10.
///
/// The state is the pair (seed, counter): every draw is a pure function of it,
/// so a stream can be copied, rewound, or split without shared state. Each
/// 64-bit draw consumes exactly one counter value. `split(i)` derives an
/// independent child stream whose seed is a hash of (seed, i); children never
/// overlap the parent because they use a different key.
///
/// The generator and all derived distributions are frozen for the lifetime of
/// the repository (see `kName`) so that every seeded result is reproducible
/// across platforms and standard libraries.
class RngStream {
 public:
  static constexpr std::string_view kName = "philox4x32-10/v1";

  constexpr RngStream() = default;
  explicit constexpr RngStream(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Raw 64 random bits.
  std::uint64_t next_u64();

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal deviate (Box-Muller, one output per two uniforms).
  double normal();

  /// Independent child stream keyed by (seed, stream_id), counter reset to 0.
  RngStream split(std::uint64_t stream_id) const;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t counter_ = 0;
};

/// One Philox4x32-10 block: exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

}  // namespace rbskm
