#include "swcp/deadline.hpp"

#include <json.hpp>

namespace swcp {

namespace {

using nlohmann::json;

bool record_bit(const ChainRecord& record, const BlockSignal& signal, std::int64_t height) {
  if (const auto* params = std::get_if<SignalParams>(&signal)) {
    if (!record.block)
      throw DataError("height " + std::to_string(height) + " has no transaction data");
    return is_congested(*record.block, *params);
  }
  const auto& alt = std::get<AltSignal>(signal);
  if (const auto* cap = std::get_if<BaseFeeCap>(&alt)) {
    // The base-fee signal works on either chain format.
    if (record.base_fee) return *record.base_fee > cap->max_base_fee;
    if (record.block && record.block->base_fee())
      return *record.block->base_fee() > cap->max_base_fee;
    throw DataError("height " + std::to_string(height) + " has no base fee");
  }
  if (!record.block)
    throw DataError("height " + std::to_string(height) + " has no transaction data");
  return alt_is_congested(*record.block, alt);
}

}  // namespace

void Challenge::validate() const {
  swcp::validate(spec);
  if (m_hat < 0) throw ParamError("maximum extension must be non-negative");
  if (t_rd_init < t_c || t_rd_init > t_c + m_hat)
    throw ParamError("challenge requires t_c <= t_rd <= t_c + m_hat");
}

ChallengeEngine::ChallengeEngine(ChainView chain, BlockSignal signal) : chain_(std::move(chain)) {
  bits_.reserve(chain_.size());
  for (std::int64_t h = chain_.first_height(); h <= chain_.last_height(); ++h)
    bits_.push_back(record_bit(chain_.at_height(h), signal, h) ? 1 : 0);
}

bool ChallengeEngine::bit(std::int64_t height) const {
  if (!chain_.covers(height))
    throw DataError("height " + std::to_string(height) + " outside chain range");
  return bits_[static_cast<std::size_t>(height - chain_.first_height())] != 0;
}

DeadlineResolution ChallengeEngine::resolve(const Challenge& challenge) const {
  challenge.validate();
  if (chain_.first_height() > challenge.t_c || chain_.last_height() < challenge.t_rd_init)
    throw DataError("chain does not cover the initial challenge period");

  const std::int64_t cap = challenge.t_c + challenge.m_hat;
  const auto offset = static_cast<std::size_t>(challenge.t_c - chain_.first_height());

  DeadlineResolution res;
  res.monotone = is_monotone(challenge.spec);

  RefreshState state(challenge.spec);
  std::int64_t t_rd = challenge.t_rd_init;
  EvalResult verdict = refresh_evaluate(
      challenge.spec, state,
      std::span<const std::uint8_t>(bits_.data() + offset,
                                    static_cast<std::size_t>(t_rd - challenge.t_c + 1)));
  res.transcript.push_back({t_rd, verdict.uncongested()});

  while (!verdict.uncongested() && t_rd < cap) {
    if (t_rd + 1 > chain_.last_height()) {
      res.provisional = true;
      break;
    }
    ++t_rd;
    const std::uint8_t next = bits_[offset + static_cast<std::size_t>(t_rd - challenge.t_c)];
    verdict = refresh_evaluate(challenge.spec, state, std::span<const std::uint8_t>(&next, 1));
    res.transcript.push_back({t_rd, verdict.uncongested()});
  }

  res.final_deadline = t_rd;
  res.capped = !verdict.uncongested() && !res.provisional && t_rd == cap;
  res.witness = verdict.witness;
  return res;
}

ChallengeEngine::Adjudication ChallengeEngine::adjudicate(const Challenge& challenge,
                                                          std::int64_t response_height) const {
  if (response_height < challenge.t_c)
    throw ParamError("response height precedes the challenge start");
  DeadlineResolution res = resolve(challenge);
  if (response_height <= res.final_deadline) return {true, std::move(res)};
  // A provisional deadline can only move forward, so anything at or before it
  // is already decidable; beyond it the chain is too short to rule.
  if (res.provisional)
    throw DataError("chain ends before the deadline is settled; cannot adjudicate");
  return {false, std::move(res)};
}

DeadlineResolution resolve_deadline(const ChainView& chain, const Challenge& challenge,
                                    const BlockSignal& signal) {
  return ChallengeEngine(chain, signal).resolve(challenge);
}

namespace {

double json_number(const json& obj, const char* key) {
  if (!obj.contains(key)) throw DataError(std::string("challenge JSON missing '") + key + "'");
  if (!obj.at(key).is_number())
    throw DataError(std::string("challenge field '") + key + "' must be a number");
  return obj.at(key).get<double>();
}

std::int64_t json_int(const json& obj, const char* key) {
  if (!obj.contains(key)) throw DataError(std::string("challenge JSON missing '") + key + "'");
  if (!obj.at(key).is_number_integer())
    throw DataError(std::string("challenge field '") + key + "' must be an integer");
  return obj.at(key).get<std::int64_t>();
}

BlockSignal parse_signal(const json& obj) {
  if (!obj.is_object() || !obj.contains("kind") || !obj.at("kind").is_string())
    throw DataError("signal JSON must be an object with a 'kind'");
  const std::string kind = obj.at("kind").get<std::string>();
  if (kind == "threshold")
    return SignalParams{json_number(obj, "theta"), json_number(obj, "gamma")};
  if (kind == "lowest-fee-density") return AltSignal{LowestFeeDensity{json_number(obj, "theta")}};
  if (kind == "highest-fee-density")
    return AltSignal{HighestFeeDensity{json_number(obj, "theta")}};
  if (kind == "nonzero-occupancy") return AltSignal{NonzeroOccupancy{json_number(obj, "gamma")}};
  if (kind == "fee") return AltSignal{FeeAbove{json_number(obj, "fee"), json_number(obj, "gamma")}};
  if (kind == "base-fee") return AltSignal{BaseFeeCap{json_number(obj, "max_base_fee")}};
  throw DataError("unknown signal kind '" + kind + "'");
}

}  // namespace

BlockSignal parse_block_signal(std::string_view json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid signal JSON: ") + e.what());
  }
  return parse_signal(obj);
}

ChallengeRequest parse_challenge(std::string_view json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid challenge JSON: ") + e.what());
  }
  if (!obj.is_object()) throw DataError("challenge JSON must be an object");

  ChallengeRequest request;
  request.challenge.t_c = json_int(obj, "t_c");
  request.challenge.t_rd_init = json_int(obj, "t_rd");
  request.challenge.m_hat = json_int(obj, "m_hat");
  if (!obj.contains("spec") || !obj.at("spec").is_string())
    throw DataError("challenge JSON missing 'spec' string");
  request.challenge.spec = parse_protocol(obj.at("spec").get<std::string>());
  if (!obj.contains("signal")) throw DataError("challenge JSON missing 'signal'");
  request.signal = parse_signal(obj.at("signal"));
  request.challenge.validate();
  return request;
}

std::string resolution_to_json(const DeadlineResolution& resolution) {
  json obj;
  obj["final_deadline"] = resolution.final_deadline;
  obj["capped"] = resolution.capped;
  obj["provisional"] = resolution.provisional;
  obj["monotone"] = resolution.monotone;
  if (resolution.witness)
    obj["witness"] = *resolution.witness;
  else
    obj["witness"] = nullptr;
  json transcript = json::array();
  for (const auto& entry : resolution.transcript)
    transcript.push_back({{"deadline", entry.deadline}, {"uncongested", entry.uncongested}});
  obj["transcript"] = std::move(transcript);
  return obj.dump();
}

}  // namespace swcp
