#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "erw/parallel.hpp"
#include "erw/rng.hpp"
#include "erw/walks.hpp"

namespace erw {

// Pathwise couplings of the reflected elephant walk with comparison walks.
// Both walks read the same uniform at each shared step; the elephant moves up
// iff u falls below its kernel threshold, the companion iff u falls below its
// own constant threshold.

enum class CouplingMode { Dominance, Shifted, Asymmetric };

std::string_view to_string(CouplingMode mode);
std::optional<CouplingMode> parse_coupling_mode(std::string_view text);

struct CoupledTrace {
  Trajectory erw;                          // reflected elephant walk from time 0
  std::vector<std::int64_t> companion;     // companion[k] sits at elephant time shift_offset + k
  double companion_up_probability = 0.5;
  CouplingMode mode = CouplingMode::Dominance;
  std::int64_t shift_offset = 0;
  std::vector<std::int64_t> distance_events;  // companion step indices k whose uniform hit the window
  std::uint64_t uniforms_consumed = 0;
};

/// D_k = 2 * (number of distance events among steps 1..k), for k = 0..K.
struct DistanceProcess {
  std::vector<std::int64_t> values;
};

DistanceProcess distance_process(const CoupledTrace& trace);

/// Reflected ERW and reflected SRW from 0 driven by U_1..U_horizon.
/// Distance events are steps where the elephant is off 0 and u lies between
/// the two thresholds.
CoupledTrace run_dominance_coupling(double p, std::int64_t horizon, UniformStream& stream);

struct ShiftedCoupling {
  CoupledTrace trace;
  DistanceProcess distance;
  /// Count of j in 1..12N^2 with 1/2 + (2p-1)/(dN) <= U_{dN^2 + j} < 1/2.
  /// Present when horizon >= 12N^2.
  std::optional<std::int64_t> binomial_counter;
};

/// For p < 1/2: the elephant runs from 0; at time dN^2 a reflected SRW starts
/// at the elephant's position and both continue on U_{dN^2 + k}.
ShiftedCoupling run_shifted_coupling(double p, std::int64_t barrier, std::int64_t d, std::int64_t horizon,
                                     UniformStream& stream);

struct AsymCoupling {
  CoupledTrace trace;
  bool activated = false;
  std::int64_t activation_time = 0;   // first k >= ceil(cN^2) with Z_k = AN
  std::int64_t coupled_steps = 0;     // steps until the elephant leaves (0, 2AN)
  bool erw_returned_to_zero = false;
  bool companion_ruined = false;      // companion hit 0 before 2AN
};

/// Up-probability of the comparison walk, 1/2 + 2(2p-1)A/(cN).
double asym_companion_up_probability(double p, std::int64_t a, std::int64_t barrier, double c);

/// True when every kernel threshold at times k >= cN^2 and states i <= 2AN is
/// at most the companion's up-probability.
bool asym_threshold_dominates(double p, std::int64_t a, std::int64_t barrier, double c);

/// For 1/2 < p < 3/4. The elephant runs from 0 until it sits at AN at some
/// time >= cN^2; from there an asymmetric walk starts at AN on the same
/// uniforms until the elephant leaves (0, 2AN), then continues alone until it
/// hits 0 or 2AN. Rejects N with 2(2p-1)A/(cN) >= 1/2. If the elephant is not
/// at AN by activation_cap the coupling stays inactive.
AsymCoupling run_asym_coupling(double p, std::int64_t a, std::int64_t barrier, double c, UniformStream& stream,
                               std::int64_t activation_cap = 0);

// Pathwise checks; each returns the first failing index or nullopt.

/// Dominance order (erw >= companion for p >= 1/2, <= for p <= 1/2).
std::optional<std::int64_t> first_order_violation(const CoupledTrace& trace, double p);

/// erw[k] <= companion[k] + D_k for p >= 1/2 on a dominance trace.
std::optional<std::int64_t> first_distance_violation(const CoupledTrace& trace);

/// companion[k] - D_k <= erw[dN^2 + k] on a shifted trace.
std::optional<std::int64_t> first_shifted_violation(const ShiftedCoupling& coupling);

/// erw[t + k] <= companion[k] over the coupled stretch.
std::optional<std::int64_t> first_asym_violation(const AsymCoupling& coupling);

// Replicated audits. Replicate r reads StreamKey{seed, r, WalkDriver}.

struct CouplingAudit {
  std::int64_t replicates = 0;
  std::int64_t violations = 0;
  std::optional<StreamKey> first_violation;
};

CouplingAudit audit_dominance(double p, std::int64_t horizon, std::int64_t replicates, const RunOptions& options);

struct ShiftedAudit {
  CouplingAudit audit;
  double counter_mean = 0.0;
  double counter_sigma = 0.0;            // standard error of counter_mean
  double counter_expected = 0.0;         // 12(1-2p)N/d
  double exceed_half_fraction = 0.0;     // empirical P(B_N > N/2)
  double exceed_half_sigma = 0.0;
};

ShiftedAudit audit_shifted(double p, std::int64_t barrier, std::int64_t d, std::int64_t replicates,
                           const RunOptions& options);

struct AsymAudit {
  CouplingAudit audit;
  std::int64_t activated = 0;
  double companion_ruin_fraction = 0.0;  // among activated replicates
  double companion_ruin_sigma = 0.0;
  double erw_return_fraction = 0.0;
  double ruin_formula = 0.0;
  double up_probability = 0.5;
};

AsymAudit audit_asym(double p, std::int64_t a, std::int64_t barrier, double c, std::int64_t replicates,
                     const RunOptions& options);

struct AsymRuinEstimate {
  std::int64_t a = 0;
  std::int64_t barrier = 0;
  double up_probability = 0.5;
  std::int64_t replicates = 0;
  double fraction = 0.0;  // empirical P(T_0 < T_{2AN}) from AN
  double sigma = 0.0;
  double formula = 0.0;   // asym_ruin_probability
};

/// Plain Monte Carlo of the asymmetric walk started at AN, run to 0 or 2AN.
AsymRuinEstimate mc_asym_ruin(std::int64_t a, std::int64_t barrier, double up_probability, std::int64_t replicates,
                              const RunOptions& options);

struct DistanceMoment {
  double p = 0.5;
  std::int64_t k = 0;
  std::int64_t replicates = 0;
  double mean = 0.0;   // estimate of E[D_k]
  double sigma = 0.0;  // standard error
  double bound = 0.0;  // 4(2p-1)/sqrt(3-4p) * sqrt(k)
  std::int64_t distance_violations = 0;  // replicates breaking erw <= srw + D or the order
  std::optional<StreamKey> first_violation;
};

/// Monte Carlo E[D_k] from dominance traces, for 1/2 <= p < 3/4.
DistanceMoment measure_distance_moment(double p, std::int64_t k, std::int64_t replicates,
                                       const RunOptions& options);

}  // namespace erw
