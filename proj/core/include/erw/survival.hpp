#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace erw {

enum class CurveSource { Exact, MonteCarlo };

std::string_view to_string(CurveSource source);

/// P(tau_N > t) on an ascending grid of t.
struct SurvivalCurve {
  std::int64_t barrier = 0;
  double p = 0.5;
  std::vector<std::int64_t> times;
  std::vector<double> survival;
  CurveSource source = CurveSource::Exact;
  std::optional<std::vector<double>> ci_halfwidth;  // Monte Carlo only

  std::size_t size() const noexcept { return times.size(); }

  /// Survival at grid time t; throws std::out_of_range if t is not on the grid.
  double at(std::int64_t t) const;

  /// Restriction to the grid points listed in `grid` (each must be present).
  SurvivalCurve restricted_to(const std::vector<std::int64_t>& grid) const;
};

/// Header `t,survival`, one row per grid point, doubles printed round-trip exact.
void write_csv(std::ostream& out, const SurvivalCurve& curve);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace erw
