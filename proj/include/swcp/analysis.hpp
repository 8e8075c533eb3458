#pragma once

// Closed-form attack probabilities.
//
// L-consecutive protocols admit an exact answer: an absorbing Markov chain
// over run lengths 0..L, walked for n steps. Sliding-window protocols get
// upper bounds: a union bound over window positions for the uncongestion
// attack, and an independent-window product for the congestion attack. All
// arithmetic runs in ExtProb so results far below double underflow survive.

#include <cstdint>
#include <vector>

#include "swcp/extprob.hpp"

namespace swcp {

enum class AttackDirection { uncongestion, congestion };

struct MarkovSpec {
  std::int64_t run_length{1};  // L >= 1
  double alpha{0.0};           // adversary's mining share
  double p{0.0};               // per-block congestion probability
  AttackDirection direction{AttackDirection::uncongestion};
};

// Row-stochastic (L+1)x(L+1) transition matrix; state i = current run of
// uncongested blocks, state L absorbing. Uncongestion direction: a block is
// uncongested when the adversary mines it or an honest block lands
// uncongested. Congestion direction: only honest uncongested blocks advance.
std::vector<std::vector<double>> build_matrix(const MarkovSpec& spec);

// Probability the adversary makes a length-n period read uncongested:
// absorption probability after n steps, computed with the two-diagonal
// sparse structure in O(n*L).
ExtProb uncongestion_attack_prob_consec(std::int64_t run_length, std::int64_t n, double alpha,
                                        double p);

// Probability the adversary makes a length-n period read congested: the
// chain must avoid absorption for all n steps (transient mass, summed
// directly to dodge 1-x cancellation).
ExtProb congestion_attack_prob_consec(std::int64_t run_length, std::int64_t n, double alpha,
                                      double p);

enum class TailSide { ge, lt };

// P[Bin(n, p) >= k] (ge) or P[Bin(n, p) < k] (lt). Log-gamma terms summed
// with compensated accumulation; relative error around 1e-11 for n <= 1e4.
ExtProb binomial_tail(std::int64_t n, double p, std::int64_t k, TailSide side);

// Union bound for the sliding-window uncongestion attack:
// (n-N+1) * P[Bin(N, q) >= K], q = alpha + (1-p)(1-alpha). May exceed 1;
// clamping is left to presentation. ParamError when n < N.
ExtProb uncongestion_bound_sw(std::int64_t window, std::int64_t k, std::int64_t n, double alpha,
                              double p);

// Congestion attack bound: P[Bin(N, q) < K]^floor(n/N), q = (1-p)(1-alpha).
ExtProb congestion_bound_sw(std::int64_t window, std::int64_t k, std::int64_t n, double alpha,
                            double p);

struct SearchKResult {
  std::int64_t best_k{0};
  ExtProb worst_uncongestion;  // bound at n = m_hat
  ExtProb worst_congestion;    // bound at its single-window worst case n = N
  bool meets_target{false};
};

// Scans k in [1, N] for the value minimizing the larger of the two
// worst-case bounds; ties resolve to the smallest k.
SearchKResult search_k(std::int64_t window, double alpha, double p_uncongestion,
                       double p_congestion, std::int64_t m_hat, double target);

}  // namespace swcp
