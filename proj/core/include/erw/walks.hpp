#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "erw/rng.hpp"

namespace erw {

// Three distributionally equivalent constructions of the elephant walk.
//   Kernel: the reflected chain |Z_n| driven by the time-inhomogeneous kernel.
//   Memory: the signed walk that resamples a uniformly chosen past step.
//   Urn:    the signed walk read off a reinforced two-colour urn.
enum class Representation { Kernel, Memory, Urn };

std::string_view to_string(Representation representation);
std::optional<Representation> parse_representation(std::string_view text);

class WalkParams {
 public:
  /// Throws std::invalid_argument unless 0 < p < 1.
  explicit WalkParams(double p, Representation representation = Representation::Kernel);

  double p() const noexcept { return p_; }
  Representation representation() const noexcept { return representation_; }

 private:
  double p_;
  Representation representation_;
};

class AsymParams {
 public:
  /// Throws std::invalid_argument unless 0 < up_probability < 1.
  explicit AsymParams(double up_probability);

  double up_probability() const noexcept { return up_; }

 private:
  double up_;
};

struct Trajectory {
  std::vector<std::int64_t> positions;
  WalkParams params{0.5};
  bool absolute = false;  // true for the reflected chain |Z|

  std::int64_t horizon() const noexcept { return static_cast<std::int64_t>(positions.size()) - 1; }
};

enum class Chain { Signed, Absolute };

/// Probability that the walk at state i, time n, moves to i + 1:
/// 1/2 + (2p - 1) i / (2n). On the absolute chain state 0 moves up surely.
/// Throws std::invalid_argument for n < 1 or |i| > n.
double erw_up_probability(double p, std::int64_t n, std::int64_t i, Chain chain = Chain::Signed);

/// One step of |Z| from `state` at time n, driven by u.
std::int64_t step_abs_erw(std::int64_t state, std::int64_t n, double u, double p);

std::int64_t step_srw(std::int64_t state, double u) noexcept;
std::int64_t step_reflected_srw(std::int64_t state, double u) noexcept;
std::int64_t step_asym_srw(std::int64_t state, double u, const AsymParams& params) noexcept;

// Every simulator consumes a fixed number of draws per step (one for Kernel,
// two for Memory and Urn) so stream positions are predictable.

Trajectory simulate_abs_erw(const WalkParams& params, std::int64_t horizon, UniformStream& stream);

/// Signed walk; X_1 = +1, then X_{n+1} = +-X_{K(n)} with K(n) uniform on 1..n.
Trajectory simulate_signed_erw_memory(const WalkParams& params, std::int64_t horizon,
                                      UniformStream& stream);

/// Signed walk from an urn holding one green ball. Each round draws a ball,
/// returns it with a new ball of the same colour (probability p) or the other
/// colour; the gambler wins on a green new ball and loses on a red one.
Trajectory simulate_urn(const WalkParams& params, std::int64_t horizon, UniformStream& stream);

/// Dispatches on params.representation().
Trajectory simulate(const WalkParams& params, std::int64_t horizon, UniformStream& stream);

/// First k >= 1 with |Z_k| = barrier, or nullopt if not reached by `cap`.
std::optional<std::int64_t> abs_erw_escape_time(double p, std::int64_t barrier, std::int64_t cap,
                                                UniformStream& stream);

/// Same for the reflected symmetric walk (sigma_N).
std::optional<std::int64_t> srw_escape_time(std::int64_t barrier, std::int64_t cap, UniformStream& stream);

}  // namespace erw
