#include "swcp/swcp.h"

#include <cstring>
#include <new>
#include <string>

#include "swcp/analysis.hpp"
#include "swcp/chain.hpp"
#include "swcp/chain_io.hpp"
#include "swcp/deadline.hpp"
#include "swcp/errors.hpp"
#include "swcp/extprob.hpp"
#include "swcp/protocol.hpp"
#include "swcp/sim.hpp"

struct swcp_chain {
  swcp::ChainView view;
};

namespace {

thread_local std::string g_last_error;

swcp_status fail(swcp_status code, const char* message) {
  g_last_error = message;
  return code;
}

// Runs fn, translating the library's error taxonomy to status codes.
template <typename Fn>
swcp_status guarded(Fn&& fn) {
  try {
    fn();
    return SWCP_OK;
  } catch (const swcp::ParamError& e) {
    return fail(SWCP_ERR_PARAM, e.what());
  } catch (const swcp::DataError& e) {
    return fail(SWCP_ERR_DATA, e.what());
  } catch (const swcp::ContractError& e) {
    return fail(SWCP_ERR_CONTRACT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SWCP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SWCP_ERR_INTERNAL, e.what());
  }
}

swcp_prob to_c(const swcp::ExtProb& p) { return {p.mantissa, p.exponent}; }

swcp::ExtProb from_c(swcp_prob p) {
  if (p.mantissa == 0.0) return swcp::ExtProb::zero();
  return {p.mantissa, p.exponent};
}

swcp::AttackDirection to_direction(swcp_direction d) {
  if (d != SWCP_UNCONGESTION && d != SWCP_CONGESTION)
    throw swcp::ParamError("direction must be uncongestion or congestion");
  return d == SWCP_UNCONGESTION ? swcp::AttackDirection::uncongestion
                                : swcp::AttackDirection::congestion;
}

void require(bool ok, const char* message) {
  if (!ok) throw swcp::ParamError(message);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

swcp_attack_estimate to_c(const swcp::AttackEstimate& e) {
  return {e.success_rate, e.std_error, e.trials, e.successes};
}

}  // namespace

extern "C" {

const char* swcp_last_error(void) { return g_last_error.c_str(); }

void swcp_string_free(char* s) { delete[] s; }

double swcp_prob_to_double(swcp_prob p) { return from_c(p).to_double(); }

double swcp_prob_log10(swcp_prob p) { return from_c(p).log10(); }

int swcp_prob_less(swcp_prob a, swcp_prob b) { return from_c(a) < from_c(b) ? 1 : 0; }

swcp_status swcp_prob_format(swcp_prob p, int clamp_to_one, char* buf, size_t buf_len) {
  return guarded([&] {
    require(buf != nullptr, "buffer is null");
    const std::string text = swcp::format_probability(from_c(p), clamp_to_one != 0);
    require(buf_len > text.size(), "buffer too small");
    std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

swcp_status swcp_consec_attack_prob(swcp_direction direction, int64_t run_length, int64_t n,
                                    double alpha, double p, swcp_prob* out) {
  return guarded([&] {
    require(out != nullptr, "output is null");
    const auto dir = to_direction(direction);
    const swcp::ExtProb value =
        dir == swcp::AttackDirection::uncongestion
            ? swcp::uncongestion_attack_prob_consec(run_length, n, alpha, p)
            : swcp::congestion_attack_prob_consec(run_length, n, alpha, p);
    *out = to_c(value);
  });
}

swcp_status swcp_sw_attack_bound(swcp_direction direction, int64_t window, int64_t k, int64_t n,
                                 double alpha, double p, swcp_prob* out) {
  return guarded([&] {
    require(out != nullptr, "output is null");
    const auto dir = to_direction(direction);
    const swcp::ExtProb value = dir == swcp::AttackDirection::uncongestion
                                    ? swcp::uncongestion_bound_sw(window, k, n, alpha, p)
                                    : swcp::congestion_bound_sw(window, k, n, alpha, p);
    *out = to_c(value);
  });
}

swcp_status swcp_binomial_tail(int64_t n, double p, int64_t k, swcp_tail_side side,
                               swcp_prob* out) {
  return guarded([&] {
    require(out != nullptr, "output is null");
    require(side == SWCP_TAIL_GE || side == SWCP_TAIL_LT, "invalid tail side");
    *out = to_c(swcp::binomial_tail(
        n, p, k, side == SWCP_TAIL_GE ? swcp::TailSide::ge : swcp::TailSide::lt));
  });
}

swcp_status swcp_search_k(int64_t window, double alpha, double p_uncongestion,
                          double p_congestion, int64_t m_hat, double target, int64_t* best_k,
                          swcp_prob* worst_uncongestion, swcp_prob* worst_congestion,
                          int* meets_target) {
  return guarded([&] {
    require(best_k != nullptr && meets_target != nullptr, "output is null");
    const swcp::SearchKResult result =
        swcp::search_k(window, alpha, p_uncongestion, p_congestion, m_hat, target);
    *best_k = result.best_k;
    if (worst_uncongestion) *worst_uncongestion = to_c(result.worst_uncongestion);
    if (worst_congestion) *worst_congestion = to_c(result.worst_congestion);
    *meets_target = result.meets_target ? 1 : 0;
  });
}

swcp_status swcp_protocol_validate(const char* spec) {
  return guarded([&] {
    require(spec != nullptr, "spec is null");
    swcp::parse_protocol(spec);
  });
}

swcp_status swcp_protocol_is_monotone(const char* spec, int* monotone) {
  return guarded([&] {
    require(spec != nullptr && monotone != nullptr, "argument is null");
    *monotone = swcp::is_monotone(swcp::parse_protocol(spec)) ? 1 : 0;
  });
}

swcp_status swcp_protocol_evaluate(const char* spec, const uint8_t* bits, size_t n,
                                   int* uncongested, int64_t* witness) {
  return guarded([&] {
    require(spec != nullptr && bits != nullptr && uncongested != nullptr, "argument is null");
    const swcp::EvalResult result =
        swcp::evaluate(swcp::parse_protocol(spec), std::span<const std::uint8_t>(bits, n));
    *uncongested = result.uncongested() ? 1 : 0;
    if (witness) *witness = result.witness.value_or(0);
  });
}

swcp_status swcp_protocol_verify_witness(const char* spec, const uint8_t* bits, size_t n,
                                         int64_t witness, int* valid) {
  return guarded([&] {
    require(spec != nullptr && bits != nullptr && valid != nullptr, "argument is null");
    *valid = swcp::verify_witness(swcp::parse_protocol(spec),
                                  std::span<const std::uint8_t>(bits, n), witness)
                 ? 1
                 : 0;
  });
}

swcp_status swcp_generate_congestion_bits(int64_t n, double p, uint64_t seed, uint8_t* out) {
  return guarded([&] {
    require(out != nullptr, "output is null");
    const swcp::CongestionVector bits = swcp::generate_congestion_vector(n, p, seed);
    std::memcpy(out, bits.data(), bits.size());
  });
}

swcp_status swcp_sample_control_bits(int64_t n, double alpha, uint64_t seed, uint8_t* out) {
  return guarded([&] {
    require(out != nullptr, "output is null");
    const swcp::ControlVector bits = swcp::sample_control_vector(n, alpha, seed);
    std::memcpy(out, bits.data(), bits.size());
  });
}

swcp_status swcp_simulate_attack(const char* spec, swcp_direction direction, int64_t n,
                                 double alpha, double p, uint64_t trials, uint64_t seed,
                                 swcp_attack_estimate* out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "argument is null");
    const swcp::AttackScenario scenario{swcp::parse_protocol(spec), to_direction(direction),
                                        n,                          alpha,
                                        p,                          trials,
                                        seed};
    *out = to_c(swcp::simulate_attack(scenario));
  });
}

swcp_status swcp_brute_force_attack_prob(const char* spec, swcp_direction direction, int64_t n,
                                         double alpha, double p, double* out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "argument is null");
    *out = swcp::brute_force_attack_prob(swcp::parse_protocol(spec), to_direction(direction), n,
                                         alpha, p);
  });
}

swcp_status swcp_sweep_attack(const char* spec, swcp_direction direction, int64_t n, double alpha,
                              double p, uint64_t trials, uint64_t seed, const char* axis,
                              const double* values, size_t value_count,
                              swcp_attack_estimate* out) {
  return guarded([&] {
    require(spec != nullptr && axis != nullptr, "argument is null");
    require(value_count == 0 || (values != nullptr && out != nullptr),
            "values/output is null");
    const swcp::AttackScenario base{swcp::parse_protocol(spec), to_direction(direction),
                                    n,                          alpha,
                                    p,                          trials,
                                    seed};
    const auto rows = swcp::sweep(base, swcp::sweep_axis_from_string(axis),
                                  std::vector<double>(values, values + value_count));
    for (size_t i = 0; i < rows.size(); ++i) out[i] = to_c(rows[i].estimate);
  });
}

swcp_status swcp_chain_parse(const char* data, size_t len, const char* format, swcp_chain** out) {
  return guarded([&] {
    require(data != nullptr && format != nullptr && out != nullptr, "argument is null");
    swcp::ChainView view = swcp::ingest_chain(std::string_view(data, len),
                                              swcp::chain_format_from_string(format));
    *out = new swcp_chain{std::move(view)};
  });
}

void swcp_chain_free(swcp_chain* chain) { delete chain; }

int64_t swcp_chain_first_height(const swcp_chain* chain) {
  return chain ? chain->view.first_height() : 0;
}

size_t swcp_chain_length(const swcp_chain* chain) { return chain ? chain->view.size() : 0; }

swcp_status swcp_chain_serialize(const swcp_chain* chain, const char* format, char** out) {
  return guarded([&] {
    require(chain != nullptr && format != nullptr && out != nullptr, "argument is null");
    *out = dup_string(
        swcp::serialize_chain(chain->view, swcp::chain_format_from_string(format)));
  });
}

swcp_status swcp_chain_signal_report(const swcp_chain* chain, const char* signal_json,
                                     char** csv_out) {
  return guarded([&] {
    require(chain != nullptr && signal_json != nullptr && csv_out != nullptr,
            "argument is null");
    const swcp::ChallengeEngine engine(chain->view, swcp::parse_block_signal(signal_json));
    std::string csv = "height,congested\n";
    for (std::int64_t h = chain->view.first_height(); h <= chain->view.last_height(); ++h) {
      csv += std::to_string(h);
      csv += engine.bit(h) ? ",1\n" : ",0\n";
    }
    *csv_out = dup_string(csv);
  });
}

swcp_status swcp_resolve_deadline(const swcp_chain* chain, const char* challenge_json,
                                  char** resolution_json) {
  return guarded([&] {
    require(chain != nullptr && challenge_json != nullptr && resolution_json != nullptr,
            "argument is null");
    const swcp::ChallengeRequest request = swcp::parse_challenge(challenge_json);
    const swcp::DeadlineResolution resolution =
        swcp::resolve_deadline(chain->view, request.challenge, request.signal);
    *resolution_json = dup_string(swcp::resolution_to_json(resolution));
  });
}

swcp_status swcp_adjudicate_response(const swcp_chain* chain, const char* challenge_json,
                                     int64_t response_height, int* accepted,
                                     char** resolution_json) {
  return guarded([&] {
    require(chain != nullptr && challenge_json != nullptr && accepted != nullptr,
            "argument is null");
    const swcp::ChallengeRequest request = swcp::parse_challenge(challenge_json);
    const swcp::ChallengeEngine engine(chain->view, request.signal);
    const auto adjudication = engine.adjudicate(request.challenge, response_height);
    *accepted = adjudication.accepted ? 1 : 0;
    if (resolution_json)
      *resolution_json = dup_string(swcp::resolution_to_json(adjudication.resolution));
  });
}

}  // extern "C"
