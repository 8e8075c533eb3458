/* swcp: congestion-aware challenge-response deadlines.
 *
 * C interface to the swcp core: block-congestion signals over recorded
 * chains, uncongested-period protocols, exact and simulated attack
 * probabilities, and the deadline-extension engine.
 *
 * Conventions:
 *   - Functions return SWCP_OK on success; on failure they return an error
 *     code and leave a message readable via swcp_last_error() on the same
 *     thread.
 *   - Strings returned through char** are heap-allocated; release them with
 *     swcp_string_free().
 *   - Protocol specs are passed in their canonical text form, e.g.
 *     "sw:N=144,K=89", "lconsec:L=50", "cum:M=10", "pct:x=75".
 */

#ifndef SWCP_SWCP_H
#define SWCP_SWCP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum swcp_status {
  SWCP_OK = 0,
  SWCP_ERR_PARAM = 1,    /* invalid argument */
  SWCP_ERR_DATA = 2,     /* malformed or insufficient input data */
  SWCP_ERR_CONTRACT = 3, /* operation precondition violated */
  SWCP_ERR_INTERNAL = 4
} swcp_status;

/* Message for the most recent failure on this thread. */
const char* swcp_last_error(void);

void swcp_string_free(char* s);

typedef enum swcp_direction {
  SWCP_UNCONGESTION = 0, /* make a period read uncongested */
  SWCP_CONGESTION = 1    /* make a period read congested */
} swcp_direction;

/* Non-negative probability with extended exponent range:
 * value = mantissa * 2^exponent, mantissa in [1,2) or 0. */
typedef struct swcp_prob {
  double mantissa;
  int64_t exponent;
} swcp_prob;

double swcp_prob_to_double(swcp_prob p); /* clamps to the double range */
double swcp_prob_log10(swcp_prob p);
int swcp_prob_less(swcp_prob a, swcp_prob b);

/* Scientific notation with 6 significant digits; "<1e-300" below the report
 * floor. clamp_to_one caps displayed bounds at 1. */
swcp_status swcp_prob_format(swcp_prob p, int clamp_to_one, char* buf, size_t buf_len);

/* ---- exact analysis ---- */

/* Exact attack success probability for the L-consecutive protocol over a
 * period of n blocks (absorbing-chain walk). */
swcp_status swcp_consec_attack_prob(swcp_direction direction, int64_t run_length, int64_t n,
                                    double alpha, double p, swcp_prob* out);

/* Upper bound for the sliding-window protocol (window N, threshold K). */
swcp_status swcp_sw_attack_bound(swcp_direction direction, int64_t window, int64_t k, int64_t n,
                                 double alpha, double p, swcp_prob* out);

typedef enum swcp_tail_side { SWCP_TAIL_GE = 0, SWCP_TAIL_LT = 1 } swcp_tail_side;

/* P[Bin(n,p) >= k] or P[Bin(n,p) < k]. */
swcp_status swcp_binomial_tail(int64_t n, double p, int64_t k, swcp_tail_side side,
                               swcp_prob* out);

/* Scan k in [1, window] minimizing the larger worst-case bound
 * (uncongestion at n = m_hat, congestion at n = window). */
swcp_status swcp_search_k(int64_t window, double alpha, double p_uncongestion,
                          double p_congestion, int64_t m_hat, double target, int64_t* best_k,
                          swcp_prob* worst_uncongestion, swcp_prob* worst_congestion,
                          int* meets_target);

/* ---- period protocols ---- */

swcp_status swcp_protocol_validate(const char* spec);
swcp_status swcp_protocol_is_monotone(const char* spec, int* monotone);

/* bits: 0 = uncongested, 1 = congested. On uncongested verdicts witness gets
 * the smallest 1-based satisfying window start (0 when the protocol has no
 * positional witness). */
swcp_status swcp_protocol_evaluate(const char* spec, const uint8_t* bits, size_t n,
                                   int* uncongested, int64_t* witness);

/* Checks only the window starting at the 1-based index; out-of-range gives
 * valid = 0, not an error. */
swcp_status swcp_protocol_verify_witness(const char* spec, const uint8_t* bits, size_t n,
                                         int64_t witness, int* valid);

/* ---- synthetic chains ---- */

/* Each bit independently 1 with probability p (resp. alpha); deterministic
 * per seed, and the two generators draw from independent streams. */
swcp_status swcp_generate_congestion_bits(int64_t n, double p, uint64_t seed, uint8_t* out);
swcp_status swcp_sample_control_bits(int64_t n, double alpha, uint64_t seed, uint8_t* out);

/* ---- adversary simulation ---- */

typedef struct swcp_attack_estimate {
  double success_rate;
  double std_error; /* sqrt(r(1-r)/trials) */
  uint64_t trials;
  uint64_t successes;
} swcp_attack_estimate;

swcp_status swcp_simulate_attack(const char* spec, swcp_direction direction, int64_t n,
                                 double alpha, double p, uint64_t trials, uint64_t seed,
                                 swcp_attack_estimate* out);

/* Exact enumeration oracle; n <= 14. */
swcp_status swcp_brute_force_attack_prob(const char* spec, swcp_direction direction, int64_t n,
                                         double alpha, double p, double* out);

/* One estimate per axis value ("n", "K", "L", "alpha"); point i runs under a
 * stream derived from (seed, i), so points are order-independent. */
swcp_status swcp_sweep_attack(const char* spec, swcp_direction direction, int64_t n, double alpha,
                              double p, uint64_t trials, uint64_t seed, const char* axis,
                              const double* values, size_t value_count,
                              swcp_attack_estimate* out);

/* ---- recorded chains and the deadline engine ---- */

typedef struct swcp_chain swcp_chain; /* opaque */

/* format: "tx-list" or "base-fee" (JSON-Lines, heights ascending by 1). */
swcp_status swcp_chain_parse(const char* data, size_t len, const char* format, swcp_chain** out);
void swcp_chain_free(swcp_chain* chain);

int64_t swcp_chain_first_height(const swcp_chain* chain);
size_t swcp_chain_length(const swcp_chain* chain);

/* Canonical JSON-Lines round-trip of the parsed chain. */
swcp_status swcp_chain_serialize(const swcp_chain* chain, const char* format, char** out);

/* Per-block congestion report as CSV "height,congested" rows (header
 * included). signal_json examples:
 *   {"kind":"threshold","theta":5.0,"gamma":0.5}
 *   {"kind":"base-fee","max_base_fee":30.0}
 *   {"kind":"lowest-fee-density","theta":2.0}   (likewise highest-fee-density)
 *   {"kind":"nonzero-occupancy","gamma":0.9}
 *   {"kind":"fee","fee":100.0,"gamma":0.5} */
swcp_status swcp_chain_signal_report(const swcp_chain* chain, const char* signal_json,
                                     char** csv_out);

/* challenge_json: {"t_c":...,"t_rd":...,"m_hat":...,"spec":"sw:N=2,K=1",
 *                  "signal":{...}} with t_rd the initial inclusive deadline.
 * The resolution JSON carries final_deadline, capped, provisional, monotone,
 * witness, and the per-step transcript. */
swcp_status swcp_resolve_deadline(const swcp_chain* chain, const char* challenge_json,
                                  char** resolution_json);

swcp_status swcp_adjudicate_response(const swcp_chain* chain, const char* challenge_json,
                                     int64_t response_height, int* accepted,
                                     char** resolution_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SWCP_SWCP_H */
