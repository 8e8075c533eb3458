#include "swcp/sim.hpp"

#include <cmath>
#include <string>

#include "swcp/rng.hpp"

namespace swcp {

namespace {

void check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0))
    throw ParamError(std::string(name) + " must lie in [0, 1]");
}

bool attack_succeeded(AttackDirection direction, const EvalResult& verdict) {
  return direction == AttackDirection::uncongestion ? verdict.uncongested()
                                                    : !verdict.uncongested();
}

}  // namespace

CongestionVector apply_adversary(const CongestionVector& pe, const ControlVector& ctrl,
                                 AttackDirection direction) {
  if (pe.size() != ctrl.size())
    throw ParamError("congestion and control vectors must have equal length");
  const std::uint8_t target = direction == AttackDirection::congestion ? 1 : 0;
  CongestionVector out(pe.size());
  for (std::size_t i = 0; i < pe.size(); ++i) out[i] = ctrl[i] ? target : pe[i];
  return out;
}

AttackEstimate simulate_attack(const AttackScenario& scenario) {
  validate(scenario.spec);
  if (scenario.n < 1) throw ParamError("period length must be at least 1");
  if (scenario.trials < 1) throw ParamError("trials must be at least 1");
  check_probability(scenario.alpha, "alpha");
  check_probability(scenario.p, "p");

  const auto n = static_cast<std::size_t>(scenario.n);
  const std::uint8_t target = scenario.direction == AttackDirection::congestion ? 1 : 0;
  CongestionVector manipulated(n);

  std::uint64_t successes = 0;
  for (std::uint64_t trial = 0; trial < scenario.trials; ++trial) {
    StreamRng pe_rng(scenario.seed, "sim-pe", trial);
    StreamRng ctrl_rng(scenario.seed, "sim-ctrl", trial);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t pe_bit = pe_rng.bernoulli(scenario.p) ? 1 : 0;
      const bool controlled = ctrl_rng.bernoulli(scenario.alpha);
      manipulated[i] = controlled ? target : pe_bit;
    }
    if (attack_succeeded(scenario.direction, evaluate(scenario.spec, manipulated))) ++successes;
  }

  const double rate =
      static_cast<double>(successes) / static_cast<double>(scenario.trials);
  const double std_error =
      std::sqrt(std::max(rate * (1.0 - rate), 0.0) / static_cast<double>(scenario.trials));
  return {rate, std_error, scenario.trials, successes};
}

double brute_force_attack_prob(const ProtocolSpec& spec, AttackDirection direction,
                               std::int64_t n, double alpha, double p) {
  validate(spec);
  if (n < 1) throw ParamError("period length must be at least 1");
  if (n > 14) throw ParamError("brute force enumeration supports n <= 14");
  check_probability(alpha, "alpha");
  check_probability(p, "p");

  const std::uint8_t target = direction == AttackDirection::congestion ? 1 : 0;
  const double w_own = alpha;
  const double w_congested = (1.0 - alpha) * p;
  const double w_uncongested = (1.0 - alpha) * (1.0 - p);

  CongestionVector bits(static_cast<std::size_t>(n));
  double total = 0.0;

  // Depth-first over per-block outcomes; zero-weight branches prune the
  // degenerate alpha/p settings down to a single path.
  auto visit = [&](auto&& self, std::size_t idx, double weight) -> void {
    if (weight == 0.0) return;
    if (idx == bits.size()) {
      if (attack_succeeded(direction, evaluate(spec, bits))) total += weight;
      return;
    }
    bits[idx] = target;
    self(self, idx + 1, weight * w_own);
    bits[idx] = 1;
    self(self, idx + 1, weight * w_congested);
    bits[idx] = 0;
    self(self, idx + 1, weight * w_uncongested);
  };
  visit(visit, 0, 1.0);
  return total;
}

SweepAxis sweep_axis_from_string(std::string_view name) {
  if (name == "n") return SweepAxis::n;
  if (name == "K") return SweepAxis::k;
  if (name == "L") return SweepAxis::l;
  if (name == "alpha") return SweepAxis::alpha;
  throw ParamError("unknown sweep axis '" + std::string(name) + "'");
}

namespace {

std::int64_t integral_axis_value(double value, const char* what) {
  const auto v = std::llround(value);
  if (std::abs(value - static_cast<double>(v)) > 1e-6 || v < 1)
    throw ParamError(std::string(what) + " sweep values must be positive integers");
  return v;
}

}  // namespace

std::vector<SweepRow> sweep(const AttackScenario& base, SweepAxis axis,
                            const std::vector<double>& values) {
  validate(base.spec);
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    AttackScenario point = base;
    point.seed = derive_stream_key(base.seed, "sweep", i);
    const double value = values[i];
    switch (axis) {
      case SweepAxis::n:
        point.n = integral_axis_value(value, "n");
        break;
      case SweepAxis::k: {
        auto* sw = std::get_if<SlidingWindow>(&point.spec);
        if (!sw) throw ParamError("axis K requires a sliding-window spec");
        sw->k = integral_axis_value(value, "K");
        break;
      }
      case SweepAxis::l: {
        auto* lc = std::get_if<LConsecutive>(&point.spec);
        if (!lc) throw ParamError("axis L requires an L-consecutive spec");
        lc->l = integral_axis_value(value, "L");
        break;
      }
      case SweepAxis::alpha:
        check_probability(value, "alpha");
        point.alpha = value;
        break;
    }
    rows.push_back({value, simulate_attack(point)});
  }
  return rows;
}

}  // namespace swcp
