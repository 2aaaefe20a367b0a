#include "erw/survival.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <stdexcept>
#include <string>

namespace erw {

std::string_view to_string(CurveSource source) {
  return source == CurveSource::Exact ? "exact" : "monte-carlo";
}

double SurvivalCurve::at(std::int64_t t) const {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) throw std::out_of_range("time " + std::to_string(t) + " not on grid");
  return survival[static_cast<std::size_t>(it - times.begin())];
}

SurvivalCurve SurvivalCurve::restricted_to(const std::vector<std::int64_t>& grid) const {
  SurvivalCurve out{barrier, p, {}, {}, source, std::nullopt};
  std::vector<double> widths;
  for (const auto t : grid) {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end() || *it != t) throw std::out_of_range("time " + std::to_string(t) + " not on grid");
    const auto idx = static_cast<std::size_t>(it - times.begin());
    out.times.push_back(t);
    out.survival.push_back(survival[idx]);
    if (ci_halfwidth) widths.push_back((*ci_halfwidth)[idx]);
  }
  if (ci_halfwidth) out.ci_halfwidth = std::move(widths);
  return out;
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_csv(std::ostream& out, const SurvivalCurve& curve) {
  out << "t,survival\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << curve.times[i] << ',' << format_double(curve.survival[i]) << '\n';
  }
}

}  // namespace erw
