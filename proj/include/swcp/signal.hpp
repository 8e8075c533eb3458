#pragma once

// Block-level congestion predicates and adversarial manipulation-cost bounds.
//
// The primary signal: a block is congested at (theta, gamma) when its
// transactions with fee density >= theta fill at least a gamma fraction of
// capacity. The alternative signals are deliberately weak; each can be
// flipped by a single cheap transaction edit (the tests construct them).

#include <variant>

#include "swcp/chain.hpp"

namespace swcp {

struct SignalParams {
  double theta{0.0};  // fee density threshold, >= 0
  double gamma{0.0};  // capacity fraction, in [0, 1]
};

// Total weight of transactions with fee density >= theta. Non-increasing in
// theta; equals capacity at theta = 0 (blocks are full).
double weight_above(const Block& block, double theta);

// weight_above / capacity, in [0, 1].
double weight_threshold(const Block& block, double theta);

// Largest theta at which the block is still (theta, gamma)-congested,
// computed from the descending fee-density step function. gamma = 0 yields
// the +infinity sentinel (every theta qualifies).
double fee_threshold(const Block& block, double gamma);

bool is_congested(const Block& block, const SignalParams& params);

// Lower bound on the fee revenue a miner forfeits by making an uncongested
// block read congested at params. ContractError if already congested.
double cost_to_congest(const Block& block, const SignalParams& params);

// Lower bound on the revenue forfeited by reversing a congested signal.
// ContractError if the block is not congested at params.
double cost_to_uncongest(const Block& block, const SignalParams& params);

// Alternative block-congestion signals.
struct LowestFeeDensity { double theta{0.0}; };   // min fee density >= theta
struct HighestFeeDensity { double theta{0.0}; };  // max fee density >= theta
struct NonzeroOccupancy { double gamma{0.0}; };   // weight of fee-paying txs >= gamma * capacity
struct FeeAbove { double fee{0.0}; double gamma{0.0}; };  // weight of txs with total fee >= fee
struct BaseFeeCap { double max_base_fee{0.0}; };  // congested iff base_fee > max_base_fee

using AltSignal =
    std::variant<LowestFeeDensity, HighestFeeDensity, NonzeroOccupancy, FeeAbove, BaseFeeCap>;

// DataError when the base-fee kind is evaluated on a block without one.
bool alt_is_congested(const Block& block, const AltSignal& kind);

// What the deadline engine accepts: the primary signal or an alternative.
using BlockSignal = std::variant<SignalParams, AltSignal>;

}  // namespace swcp
