#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace erw {

// Which consumer a stream feeds. Part of the stream identity, so the walk
// driver and the limit-process sampler of one replicate never share draws.
enum class Purpose : std::uint8_t {
  WalkDriver = 0,
  LimitProcess = 1,
  Shuffling = 2,
};

std::string_view to_string(Purpose purpose);
std::optional<Purpose> parse_purpose(std::string_view text);

struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
  Purpose purpose = Purpose::WalkDriver;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

std::string to_string(const StreamKey& key);

/// Philox4x32-10 counter-based block function (Salmon, Moraes, Dror, Shaw 2011).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key) noexcept;
};

/// A uniform stream addressed by a StreamKey.
///
/// The key fixes the Philox key (master seed) and the upper counter words
/// (replicate index, purpose); the low counter words enumerate blocks. Any
/// replicate's stream is therefore available without serial warm-up, and the
/// same key always reproduces the same bits.
///
/// Not thread-safe; each replicate owns its stream.
class UniformStream {
 public:
  explicit UniformStream(StreamKey key) noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform() noexcept;

  /// Raw 64 random bits.
  std::uint64_t next_bits() noexcept;

  /// Standard normal by inverse CDF; consumes exactly one draw.
  double next_normal();

  /// Number of draws taken so far (each next_* call counts as one).
  std::uint64_t consumed() const noexcept { return consumed_; }

  const StreamKey& key() const noexcept { return key_; }

 private:
  void refill() noexcept;

  StreamKey key_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int cursor_ = 2;
  std::uint64_t consumed_ = 0;
};

inline UniformStream derive_stream(StreamKey key) noexcept { return UniformStream(key); }

// Block counters occupy 56 bits of the Philox counter.
inline constexpr std::uint64_t kMaxBlocksPerStream = std::uint64_t{1} << 56;

}  // namespace erw
