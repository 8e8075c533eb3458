#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "support/oracles.hpp"
#include "swcp/chain_io.hpp"
#include "swcp/deadline.hpp"
#include "swcp/rng.hpp"

using namespace swcp;
using Bits = std::vector<std::uint8_t>;

namespace {

const BlockSignal kCap30 = AltSignal{BaseFeeCap{30.0}};

// Smallest deadline in [t_rd_init, t_c + m_hat] whose period evaluates
// uncongested, else the cap; straight from the defining loop.
std::int64_t brute_force_deadline(const ProtocolSpec& spec, const Bits& bits, std::int64_t t_c,
                                  std::int64_t t_rd_init, std::int64_t m_hat) {
  const std::int64_t cap = t_c + m_hat;
  for (std::int64_t t = t_rd_init; t <= cap; ++t) {
    const Bits period(bits.begin() + t_c, bits.begin() + t + 1);
    if (oracles::uncongested(spec, period)) return t;
  }
  return cap;
}

}  // namespace

TEST_CASE("worked example: one uncongested block rescues the deadline") {
  const Bits bits{1, 1, 1, 1, 0, 1, 1};
  const ChainView chain = oracles::base_fee_chain(bits);
  const Challenge ch{0, 3, 6, SlidingWindow{2, 1}};

  const DeadlineResolution res = resolve_deadline(chain, ch, kCap30);
  CHECK(res.final_deadline == 4);
  CHECK_FALSE(res.capped);
  CHECK_FALSE(res.provisional);
  CHECK(res.monotone);
  CHECK(res.witness == 4);  // 1-based window start: positions 4..5 are [1,0]
  REQUIRE(res.transcript.size() == 2);
  CHECK(res.transcript[0].deadline == 3);
  CHECK_FALSE(res.transcript[0].uncongested);
  CHECK(res.transcript[1].deadline == 4);
  CHECK(res.transcript[1].uncongested);
}

TEST_CASE("all-congested chain runs to the cap") {
  const ChainView chain = oracles::base_fee_chain(Bits(7, 1));
  const DeadlineResolution res = resolve_deadline(chain, {0, 3, 6, SlidingWindow{2, 1}}, kCap30);
  CHECK(res.final_deadline == 6);
  CHECK(res.capped);
  CHECK_FALSE(res.provisional);
  CHECK_FALSE(res.witness.has_value());
}

TEST_CASE("already uncongested initial period needs no extension") {
  const ChainView chain = oracles::base_fee_chain(Bits(7, 0));
  const DeadlineResolution res = resolve_deadline(chain, {0, 3, 6, SlidingWindow{2, 1}}, kCap30);
  CHECK(res.final_deadline == 3);
  CHECK_FALSE(res.capped);
  CHECK(res.transcript.size() == 1);
}

TEST_CASE("chain shorter than the cap yields a provisional resolution") {
  const ChainView chain = oracles::base_fee_chain(Bits(5, 1));  // heights 0..4
  const DeadlineResolution res = resolve_deadline(chain, {0, 3, 10, SlidingWindow{2, 1}}, kCap30);
  CHECK(res.provisional);
  CHECK_FALSE(res.capped);
  CHECK(res.final_deadline == 4);
}

TEST_CASE("chain not covering the initial period is a data error") {
  const ChainView chain = oracles::base_fee_chain(Bits(3, 1));  // heights 0..2
  CHECK_THROWS_AS(resolve_deadline(chain, {0, 3, 6, SlidingWindow{2, 1}}, kCap30), DataError);
  const ChainView late = oracles::base_fee_chain(Bits(5, 1), 2);  // starts at height 2
  CHECK_THROWS_AS(resolve_deadline(late, {0, 3, 6, SlidingWindow{2, 1}}, kCap30), DataError);
}

TEST_CASE("challenge invariants are enforced") {
  const ChainView chain = oracles::base_fee_chain(Bits(7, 1));
  CHECK_THROWS_AS(resolve_deadline(chain, {3, 2, 6, SlidingWindow{2, 1}}, kCap30), ParamError);
  CHECK_THROWS_AS(resolve_deadline(chain, {0, 7, 6, SlidingWindow{2, 1}}, kCap30), ParamError);
  CHECK_THROWS_AS(resolve_deadline(chain, {0, 1, -1, SlidingWindow{2, 1}}, kCap30), ParamError);
}

TEST_CASE("adjudication against the worked example") {
  const ChainView chain = oracles::base_fee_chain(Bits{1, 1, 1, 1, 0, 1, 1});
  const ChallengeEngine engine(chain, kCap30);
  const Challenge ch{0, 3, 6, SlidingWindow{2, 1}};

  CHECK(engine.adjudicate(ch, 4).accepted);
  CHECK_FALSE(engine.adjudicate(ch, 5).accepted);
  CHECK(engine.adjudicate(ch, 0).accepted);  // t_c is within any deadline
  CHECK_THROWS_AS(engine.adjudicate(ch, -1), ParamError);
}

TEST_CASE("provisional resolutions adjudicate only up to the known deadline") {
  const ChainView chain = oracles::base_fee_chain(Bits(5, 1));
  const ChallengeEngine engine(chain, kCap30);
  const Challenge ch{0, 3, 10, SlidingWindow{2, 1}};
  // The deadline can only move forward of the provisional point, so earlier
  // responses are safely accepted and later ones cannot be ruled on yet.
  CHECK(engine.adjudicate(ch, 3).accepted);
  CHECK_THROWS_AS(engine.adjudicate(ch, 9), DataError);
}

TEST_CASE("signals derived from transaction data drive the engine") {
  // Heights 0..2: congested iff the 8-density transaction fills >= half.
  std::vector<ChainRecord> records;
  records.push_back({Block(100.0, {{60.0, 8.0}, {40.0, 1.0}}), std::nullopt});
  records.push_back({Block(100.0, {{10.0, 8.0}, {90.0, 1.0}}), std::nullopt});
  records.push_back({Block(100.0, {{70.0, 8.0}, {30.0, 1.0}}), std::nullopt});
  const ChainView chain(0, std::move(records));

  const ChallengeEngine engine(chain, SignalParams{5.0, 0.5});
  CHECK(engine.bit(0));
  CHECK_FALSE(engine.bit(1));
  CHECK(engine.bit(2));

  const DeadlineResolution res = engine.resolve({0, 1, 2, LConsecutive{1}});
  CHECK(res.final_deadline == 1);

  // Those blocks carry no base fee, so a base-fee signal cannot bind.
  CHECK_THROWS_AS(ChallengeEngine(chain, kCap30), DataError);
}

TEST_CASE("non-monotone protocols resolve but carry a warning flag") {
  const ChainView chain = oracles::base_fee_chain(Bits{0, 0, 1, 1, 1, 0, 1});
  const DeadlineResolution res = resolve_deadline(chain, {0, 1, 6, Percentage{60000}}, kCap30);
  CHECK_FALSE(res.monotone);
  CHECK(res.final_deadline == 1);  // 2 of 2 uncongested at the initial deadline

  // Extending past an uncongested verdict is exactly what non-monotonicity
  // permits: starting later, the same chain caps out.
  const DeadlineResolution capped =
      resolve_deadline(chain, {0, 4, 6, Percentage{60000}}, kCap30);
  CHECK(capped.capped);
}

TEST_CASE("cap safety and minimality against brute force on random chains") {
  StreamRng rng(7077, "deadline-brute");
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t len = 2 + rng.next() % 199;
    Bits bits(len);
    for (auto& b : bits) b = rng.bernoulli(0.6) ? 1 : 0;
    const ChainView chain = oracles::base_fee_chain(bits);

    const std::int64_t window = 1 + static_cast<std::int64_t>(rng.next() % 8);
    const std::int64_t k = 1 + static_cast<std::int64_t>(rng.next() % window);
    const ProtocolSpec spec = SlidingWindow{window, k};

    const auto last = static_cast<std::int64_t>(len) - 1;
    const auto t_c = static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(last + 1));
    const auto m_hat =
        static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(last - t_c + 1));
    const std::int64_t t_rd_init =
        t_c + static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(m_hat + 1));

    const Challenge ch{t_c, t_rd_init, m_hat, spec};
    const DeadlineResolution res = resolve_deadline(chain, ch, kCap30);

    CHECK(res.final_deadline >= t_rd_init);
    CHECK(res.final_deadline <= t_c + m_hat);  // cap safety
    CHECK_FALSE(res.provisional);              // chain covers the whole cap range
    CHECK(res.final_deadline == brute_force_deadline(spec, bits, t_c, t_rd_init, m_hat));

    // capped flag is exactly "hit the cap while still congested".
    const Bits final_period(bits.begin() + t_c, bits.begin() + res.final_deadline + 1);
    const bool final_uncongested = oracles::uncongested(spec, final_period);
    CHECK(res.capped == (!final_uncongested && res.final_deadline == t_c + m_hat));
    if (res.witness)
      CHECK(verify_witness(spec, final_period, *res.witness));

    // Each transcript verdict (produced incrementally) matches whole-period
    // evaluation of the corresponding prefix.
    for (const auto& entry : res.transcript) {
      const Bits prefix(bits.begin() + t_c, bits.begin() + entry.deadline + 1);
      CHECK(entry.uncongested == oracles::uncongested(spec, prefix));
    }
  }
}

TEST_CASE("challenge JSON round trip") {
  const ChallengeRequest req = parse_challenge(
      R"({"t_c":0,"t_rd":3,"m_hat":6,"spec":"sw:N=2,K=1","signal":{"kind":"base-fee","max_base_fee":30}})");
  CHECK(req.challenge.t_c == 0);
  CHECK(req.challenge.t_rd_init == 3);
  CHECK(req.challenge.m_hat == 6);
  CHECK(to_string(req.challenge.spec) == "sw:N=2,K=1");

  const ChainView chain = oracles::base_fee_chain(Bits{1, 1, 1, 1, 0, 1, 1});
  const DeadlineResolution res = resolve_deadline(chain, req.challenge, req.signal);
  const std::string json = resolution_to_json(res);
  CHECK(json.find("\"final_deadline\":4") != std::string::npos);
  CHECK(json.find("\"capped\":false") != std::string::npos);
  CHECK(json.find("\"transcript\"") != std::string::npos);

  CHECK_THROWS_AS(parse_challenge("{"), DataError);
  CHECK_THROWS_AS(parse_challenge(R"({"t_c":0,"t_rd":3,"m_hat":6,"spec":"sw:N=2,K=1"})"),
                  DataError);
  CHECK_THROWS_AS(
      parse_challenge(
          R"({"t_c":5,"t_rd":3,"m_hat":6,"spec":"sw:N=2,K=1","signal":{"kind":"base-fee","max_base_fee":1}})"),
      ParamError);
  CHECK_THROWS_AS(
      parse_challenge(
          R"({"t_c":0,"t_rd":3,"m_hat":6,"spec":"sw:N=2,K=1","signal":{"kind":"martian"}})"),
      DataError);
}

TEST_CASE("every signal kind parses and drives the engine") {
  for (const char* signal_json : {
           R"({"kind":"threshold","theta":5.0,"gamma":0.5})",
           R"({"kind":"lowest-fee-density","theta":2.0})",
           R"({"kind":"highest-fee-density","theta":2.0})",
           R"({"kind":"nonzero-occupancy","gamma":0.9})",
           R"({"kind":"fee","fee":100.0,"gamma":0.5})",
       }) {
    const BlockSignal signal = parse_block_signal(signal_json);
    std::vector<ChainRecord> records;
    records.push_back({Block(100.0, {{60.0, 8.0}, {40.0, 1.0}}), std::nullopt});
    const ChainView chain(0, std::move(records));
    CHECK_NOTHROW(ChallengeEngine(chain, signal));
  }
}
