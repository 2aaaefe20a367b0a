#include "oracles.hpp"

#include <cmath>
#include <functional>

namespace erw::oracle {

std::vector<double> srw_survival_signed_dp(std::int64_t barrier, std::int64_t t_max) {
  const std::int64_t width = 2 * barrier - 1;  // states -N+1 .. N-1
  std::vector<double> mass(static_cast<std::size_t>(width), 0.0);
  std::vector<double> next(mass.size(), 0.0);
  mass[static_cast<std::size_t>(barrier - 1)] = 1.0;
  std::vector<double> survival{1.0};
  for (std::int64_t t = 1; t <= t_max; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::int64_t s = 0; s < width; ++s) {
      const double m = mass[static_cast<std::size_t>(s)];
      if (s + 1 < width) next[static_cast<std::size_t>(s + 1)] += 0.5 * m;
      if (s - 1 >= 0) next[static_cast<std::size_t>(s - 1)] += 0.5 * m;
    }
    mass.swap(next);
    double total = 0.0;
    for (const double m : mass) total += m;
    survival.push_back(total);
  }
  return survival;
}

double srw_survival_reflection(std::int64_t barrier, std::int64_t t) {
  auto point = [t](std::int64_t y) -> double {
    if ((t + y) % 2 != 0 || y > t || y < -t) return 0.0;
    const auto up = (t + y) / 2;
    return std::exp(std::lgamma(static_cast<double>(t) + 1.0) - std::lgamma(static_cast<double>(up) + 1.0) -
                    std::lgamma(static_cast<double>(t - up) + 1.0) - static_cast<double>(t) * std::log(2.0));
  };
  double total = 0.0;
  const std::int64_t reach = t / (4 * barrier) + 2;
  for (std::int64_t x = -barrier + 1; x <= barrier - 1; ++x) {
    for (std::int64_t k = -reach; k <= reach; ++k) {
      total += point(x + 4 * k * barrier) - point(2 * barrier - x + 4 * k * barrier);
    }
  }
  return total;
}

std::vector<double> erw_survival_enumeration(std::int64_t barrier, double p, std::int64_t t_max) {
  std::vector<double> survival(static_cast<std::size_t>(t_max) + 1, 0.0);
  survival[0] = 1.0;
  // Walk the tree of signed paths that have not yet hit +-N.
  std::function<void(std::int64_t, std::int64_t, std::int64_t, double)> visit =
      [&](std::int64_t n, std::int64_t ups, std::int64_t position, double weight) {
        survival[static_cast<std::size_t>(n)] += weight;
        if (n == t_max) return;
        const std::int64_t downs = n - ups;
        const double nd = static_cast<double>(n);
        const double up = (p * static_cast<double>(ups) + (1.0 - p) * static_cast<double>(downs)) / nd;
        if (position + 1 < barrier) visit(n + 1, ups + 1, position + 1, weight * up);
        if (position - 1 > -barrier) visit(n + 1, ups, position - 1, weight * (1.0 - up));
      };
  if (barrier > 1) visit(1, 1, 1, 1.0);  // X_1 = +1; the sign is irrelevant to |Z|
  return survival;
}

double erw_tau2_survival_product(double p, std::int64_t t) {
  double survival = 1.0;
  for (std::int64_t j = 0; 2 * j + 2 <= t; ++j) {
    const double q = 0.5 + (2.0 * p - 1.0) / (2.0 * static_cast<double>(2 * j + 1));
    survival *= 1.0 - q;
  }
  return survival;
}

double asym_ruin_direct(std::int64_t a, std::int64_t barrier, double up_probability) {
  const double power = std::pow((1.0 - up_probability) / up_probability, static_cast<double>(a * barrier));
  return power / (power + 1.0);
}

}  // namespace erw::oracle
