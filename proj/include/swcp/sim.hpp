#pragma once

// Monte Carlo attack estimation for any protocol, the optimal monotone
// adversary move, and an exhaustive small-instance oracle.

#include <cstdint>
#include <vector>

#include "swcp/analysis.hpp"
#include "swcp/chain.hpp"
#include "swcp/protocol.hpp"

namespace swcp {

struct AttackScenario {
  ProtocolSpec spec;
  AttackDirection direction{AttackDirection::uncongestion};
  std::int64_t n{1};        // period length
  double alpha{0.0};        // adversary mining share
  double p{0.0};            // per-block congestion probability
  std::uint64_t trials{1};
  std::uint64_t seed{0};
};

struct AttackEstimate {
  double success_rate{0.0};
  double std_error{0.0};  // sqrt(r(1-r)/trials)
  std::uint64_t trials{0};
  std::uint64_t successes{0};
};

// One-sided 95% bound on the true rate when zero successes were observed.
inline double rule_of_three_bound(std::uint64_t trials) {
  const double b = 3.0 / static_cast<double>(trials);
  return b > 1.0 ? 1.0 : b;
}

// Controlled positions forced to the attack's target signal (0 for
// uncongestion, 1 for congestion); uncontrolled positions pass through.
// For the bitwise-monotone predicates used here this is the adversary's
// best move among all manipulations of the controlled blocks.
CongestionVector apply_adversary(const CongestionVector& pe, const ControlVector& ctrl,
                                 AttackDirection direction);

// Per trial i: pe and ctrl come from streams keyed (seed, "sim-pe", i) and
// (seed, "sim-ctrl", i), so trials are independent and any execution order
// or worker split reproduces the same estimate.
AttackEstimate simulate_attack(const AttackScenario& scenario);

// Exact success probability by weighted enumeration of the 3^n outcomes
// per block (adversary-owned / honest-congested / honest-uncongested).
// ParamError for n > 14.
double brute_force_attack_prob(const ProtocolSpec& spec, AttackDirection direction,
                               std::int64_t n, double alpha, double p);

enum class SweepAxis { n, k, l, alpha };

SweepAxis sweep_axis_from_string(std::string_view name);

struct SweepRow {
  double axis_value{0.0};
  AttackEstimate estimate;
};

// One simulation per axis value; point i runs under the derived seed
// (seed, "sweep", i) so adding or reordering points never perturbs others.
std::vector<SweepRow> sweep(const AttackScenario& base, SweepAxis axis,
                            const std::vector<double>& values);

}  // namespace swcp
