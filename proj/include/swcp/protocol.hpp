#pragma once

// Uncongested-period protocols: whole-period evaluation, compact witnesses,
// witness verification, and incremental (refresh) evaluation for periods
// that grow one block at a time.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "swcp/chain.hpp"

namespace swcp {

// Period is uncongested when at least m blocks are uncongested.
struct CumulativeM {
  std::int64_t m{1};
};

// Period is uncongested when at least x% of its blocks are uncongested.
// x is held in units of 0.001% so the threshold comparison stays exact in
// integer arithmetic (no float boundary errors at e.g. x=50, n=2).
struct Percentage {
  std::int64_t milli_percent{0};  // [0, 100000]
};

// Period is uncongested when it contains l consecutive uncongested blocks.
struct LConsecutive {
  std::int64_t l{1};
};

// Period is uncongested when some window of n consecutive blocks contains at
// least k uncongested blocks. Periods shorter than n are congested (no
// window exists). n = k coincides with LConsecutive{n}.
struct SlidingWindow {
  std::int64_t n{1};
  std::int64_t k{1};
};

using ProtocolSpec = std::variant<CumulativeM, Percentage, LConsecutive, SlidingWindow>;

// Canonical text forms: "cum:M=10", "pct:x=75", "lconsec:L=50", "sw:N=144,K=89".
ProtocolSpec parse_protocol(std::string_view text);
std::string to_string(const ProtocolSpec& spec);

void validate(const ProtocolSpec& spec);  // ParamError on bad parameters

// True for CumulativeM, LConsecutive, SlidingWindow; false for Percentage
// (an uncongested period can sit inside a congested extension).
bool is_monotone(const ProtocolSpec& spec);

enum class PeriodStatus : std::uint8_t { congested, uncongested };

struct EvalResult {
  PeriodStatus status{PeriodStatus::congested};
  // Smallest 1-based start of a satisfying window/run; only LConsecutive and
  // SlidingWindow produce one (the counting protocols' witness is the count).
  std::optional<std::int64_t> witness;

  bool uncongested() const { return status == PeriodStatus::uncongested; }
};

// Whole-period evaluation by direct scan. Bits must be 0/1; empty input is a
// ParamError.
EvalResult evaluate(const ProtocolSpec& spec, std::span<const std::uint8_t> bits);

// Checks only the window/run starting at the 1-based index. Out-of-range
// indices return false. ParamError for counting protocols (no positional
// witness exists).
bool verify_witness(const ProtocolSpec& spec, std::span<const std::uint8_t> bits,
                    std::int64_t witness);

// Carry for incremental evaluation: O(1) counters, plus the trailing n-1
// bits for SlidingWindow. Replaying a period through refresh_evaluate gives
// the same verdict and witness as evaluate on the whole period.
class RefreshState {
 public:
  RefreshState() = default;
  explicit RefreshState(const ProtocolSpec& spec);

  std::int64_t position() const { return position_; }

 private:
  friend EvalResult refresh_evaluate(const ProtocolSpec&, RefreshState&,
                                     std::span<const std::uint8_t>);

  std::int64_t position_{0};     // blocks consumed so far
  std::int64_t zeros_{0};        // total uncongested count (cum / pct)
  std::int64_t run_{0};          // trailing uncongested run (lconsec)
  std::int64_t window_zeros_{0}; // zeros among the buffered trailing bits (sw)
  std::vector<std::uint8_t> tail_;  // last n-1 bits, ring buffer (sw)
  std::size_t tail_head_{0};
  std::optional<std::int64_t> witness_;  // first satisfying index, sticky
};

// Extends the period with new_bits and returns the verdict for the whole
// extended period. state must have been produced by RefreshState(spec) and
// fed only prefixes of the same period.
EvalResult refresh_evaluate(const ProtocolSpec& spec, RefreshState& state,
                            std::span<const std::uint8_t> new_bits);

}  // namespace swcp
