#pragma once

// Deadline extension for challenge-response over a recorded chain: evaluate
// the period protocol over the challenge window, extend the deadline one
// block at a time while the window stays congested, stop at the first
// uncongested verdict or at the hard cap t_c + m_hat.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swcp/chain.hpp"
#include "swcp/protocol.hpp"
#include "swcp/signal.hpp"

namespace swcp {

struct Challenge {
  std::int64_t t_c{0};        // challenge start height
  std::int64_t t_rd_init{0};  // initial response deadline, inclusive
  std::int64_t m_hat{0};      // maximum extension past t_c, in blocks
  ProtocolSpec spec;

  void validate() const;  // t_c <= t_rd_init <= t_c + m_hat
};

struct TranscriptEntry {
  std::int64_t deadline{0};
  bool uncongested{false};
};

struct DeadlineResolution {
  std::int64_t final_deadline{0};
  bool capped{false};       // cap reached with the last verdict still congested
  bool provisional{false};  // chain ended before an uncongested verdict or the cap
  bool monotone{true};      // false flags a non-monotone protocol: the returned
                            // deadline is valid but not necessarily minimal
  std::optional<std::int64_t> witness;  // 1-based index into the final period
  std::vector<TranscriptEntry> transcript;
};

// Binds a chain to a block signal and precomputes the per-height congestion
// bits, so adjudicating many challenges costs O(1) amortized per block.
// Immutable after construction; safe to share across threads.
class ChallengeEngine {
 public:
  ChallengeEngine(ChainView chain, BlockSignal signal);

  const ChainView& chain() const { return chain_; }
  bool bit(std::int64_t height) const;  // 1 = congested

  DeadlineResolution resolve(const Challenge& challenge) const;

  struct Adjudication {
    bool accepted{false};
    DeadlineResolution resolution;
  };

  // Accepted iff response_height <= final deadline. ParamError when the
  // response precedes the challenge; DataError when the chain is too short
  // to decide.
  Adjudication adjudicate(const Challenge& challenge, std::int64_t response_height) const;

 private:
  ChainView chain_;
  std::vector<std::uint8_t> bits_;
};

// One-shot convenience wrappers.
DeadlineResolution resolve_deadline(const ChainView& chain, const Challenge& challenge,
                                    const BlockSignal& signal);

struct ChallengeRequest {
  Challenge challenge;
  BlockSignal signal;
};

// {"t_c":0,"t_rd":3,"m_hat":6,"spec":"sw:N=2,K=1","signal":{"kind":"base-fee","max_base_fee":30}}
ChallengeRequest parse_challenge(std::string_view json_text);

// Just the "signal" object, e.g. {"kind":"threshold","theta":5.0,"gamma":0.5}.
BlockSignal parse_block_signal(std::string_view json_text);

std::string resolution_to_json(const DeadlineResolution& resolution);

}  // namespace swcp
