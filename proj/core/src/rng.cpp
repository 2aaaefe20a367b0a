#include "erw/rng.hpp"

#include <boost/math/distributions/normal.hpp>

namespace erw {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline Philox4x32::Counter round(const Philox4x32::Counter& c, const Philox4x32::Key& k) noexcept {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

}  // namespace

std::string_view to_string(Purpose purpose) {
  switch (purpose) {
    case Purpose::WalkDriver: return "walk-driver";
    case Purpose::LimitProcess: return "limit-process";
    case Purpose::Shuffling: return "shuffling";
  }
  return "unknown";
}

std::optional<Purpose> parse_purpose(std::string_view text) {
  if (text == "walk-driver") return Purpose::WalkDriver;
  if (text == "limit-process") return Purpose::LimitProcess;
  if (text == "shuffling") return Purpose::Shuffling;
  return std::nullopt;
}

std::string to_string(const StreamKey& key) {
  return "{seed=" + std::to_string(key.master_seed) + ", replicate=" +
         std::to_string(key.replicate_index) + ", purpose=" + std::string(to_string(key.purpose)) + "}";
}

Philox4x32::Counter Philox4x32::generate(Counter counter, Key key) noexcept {
  counter = round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    counter = round(counter, key);
  }
  return counter;
}

UniformStream::UniformStream(StreamKey key) noexcept : key_(key) {}

void UniformStream::refill() noexcept {
  const Philox4x32::Counter counter{
      static_cast<std::uint32_t>(block_),
      static_cast<std::uint32_t>((block_ >> 32) & 0x00FFFFFFu) |
          (static_cast<std::uint32_t>(key_.purpose) << 24),
      static_cast<std::uint32_t>(key_.replicate_index),
      static_cast<std::uint32_t>(key_.replicate_index >> 32),
  };
  const Philox4x32::Key philox_key{
      static_cast<std::uint32_t>(key_.master_seed),
      static_cast<std::uint32_t>(key_.master_seed >> 32),
  };
  buffer_ = Philox4x32::generate(counter, philox_key);
  ++block_;
  cursor_ = 0;
}

std::uint64_t UniformStream::next_bits() noexcept {
  if (cursor_ == 2) refill();
  const auto lo = buffer_[2 * cursor_];
  const auto hi = buffer_[2 * cursor_ + 1];
  ++cursor_;
  ++consumed_;
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

double UniformStream::next_uniform() noexcept {
  return static_cast<double>(next_bits() >> 11) * kTwoPow53Inv;
}

double UniformStream::next_normal() {
  // Midpoint of the 53-bit cell keeps the argument strictly inside (0, 1).
  const double u = (static_cast<double>(next_bits() >> 11) + 0.5) * kTwoPow53Inv;
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, u);
}

}  // namespace erw
