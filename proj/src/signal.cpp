#include "swcp/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swcp {

namespace {

void check_theta(double theta) {
  if (!(theta >= 0.0)) throw ParamError("theta must be non-negative");
}

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParamError("gamma must lie in [0, 1]");
}

// Transactions sorted by descending fee density; the induced step function
// gamma -> fee density is what the threshold and cost computations walk.
std::vector<Transaction> descending_profile(const Block& block) {
  std::vector<Transaction> txs = block.txs();
  std::stable_sort(txs.begin(), txs.end(), [](const Transaction& a, const Transaction& b) {
    return a.fee_density > b.fee_density;
  });
  return txs;
}

}  // namespace

double weight_above(const Block& block, double theta) {
  check_theta(theta);
  double w = 0.0;
  for (const auto& tx : block.txs())
    if (tx.fee_density >= theta) w += tx.size;
  return w;
}

double weight_threshold(const Block& block, double theta) {
  return weight_above(block, theta) / block.capacity();
}

double fee_threshold(const Block& block, double gamma) {
  check_gamma(gamma);
  if (gamma == 0.0) return std::numeric_limits<double>::infinity();
  const double target = gamma * block.capacity();
  double cum = 0.0;
  const auto profile = descending_profile(block);
  for (const auto& tx : profile) {
    cum += tx.size;
    if (cum >= target) return tx.fee_density;
  }
  // Blocks are full, so cum == capacity >= target always lands above.
  return profile.back().fee_density;
}

bool is_congested(const Block& block, const SignalParams& params) {
  check_theta(params.theta);
  check_gamma(params.gamma);
  return weight_above(block, params.theta) >= params.gamma * block.capacity();
}

double cost_to_congest(const Block& block, const SignalParams& params) {
  if (is_congested(block, params))
    throw ContractError("cost_to_congest: block is already congested at these parameters");
  const double gamma_at_theta = weight_threshold(block, params.theta);
  const double lower = 1.0 - (params.gamma - gamma_at_theta);

  // capacity * integral over [lower, 1] of the fee-density step function:
  // exactly the fees of the cheapest (gamma - gamma_B(theta)) fraction.
  double integral = 0.0;
  double cum = 0.0;
  for (const auto& tx : descending_profile(block)) {
    const double seg_lo = cum / block.capacity();
    cum += tx.size;
    const double seg_hi = cum / block.capacity();
    const double overlap = std::min(seg_hi, 1.0) - std::max(seg_lo, lower);
    if (overlap > 0.0) integral += overlap * tx.fee_density;
  }
  return block.capacity() * integral;
}

double cost_to_uncongest(const Block& block, const SignalParams& params) {
  if (!is_congested(block, params))
    throw ContractError("cost_to_uncongest: block is not congested at these parameters");
  const double upper = weight_threshold(block, params.theta);

  // capacity * integral over [gamma, gamma_B(theta)] of (density - theta):
  // the cheapest excess fees among transactions at or above theta.
  double integral = 0.0;
  double cum = 0.0;
  for (const auto& tx : descending_profile(block)) {
    const double seg_lo = cum / block.capacity();
    cum += tx.size;
    const double seg_hi = cum / block.capacity();
    const double overlap = std::min(seg_hi, upper) - std::max(seg_lo, params.gamma);
    if (overlap > 0.0) integral += overlap * (tx.fee_density - params.theta);
  }
  return block.capacity() * integral;
}

bool alt_is_congested(const Block& block, const AltSignal& kind) {
  struct Visitor {
    const Block& block;

    bool operator()(const LowestFeeDensity& s) const {
      check_theta(s.theta);
      double lowest = std::numeric_limits<double>::infinity();
      for (const auto& tx : block.txs()) lowest = std::min(lowest, tx.fee_density);
      return lowest >= s.theta;
    }
    bool operator()(const HighestFeeDensity& s) const {
      check_theta(s.theta);
      double highest = 0.0;
      for (const auto& tx : block.txs()) highest = std::max(highest, tx.fee_density);
      return highest >= s.theta;
    }
    bool operator()(const NonzeroOccupancy& s) const {
      check_gamma(s.gamma);
      double w = 0.0;
      for (const auto& tx : block.txs())
        if (tx.fee_density > 0.0) w += tx.size;
      return w >= s.gamma * block.capacity();
    }
    bool operator()(const FeeAbove& s) const {
      if (!(s.fee >= 0.0)) throw ParamError("fee must be non-negative");
      check_gamma(s.gamma);
      double w = 0.0;
      for (const auto& tx : block.txs())
        if (tx.size * tx.fee_density >= s.fee) w += tx.size;
      return w >= s.gamma * block.capacity();
    }
    bool operator()(const BaseFeeCap& s) const {
      if (!block.base_fee()) throw DataError("block carries no base fee");
      return *block.base_fee() > s.max_base_fee;
    }
  };
  return std::visit(Visitor{block}, kind);
}

}  // namespace swcp
