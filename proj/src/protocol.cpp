#include "swcp/protocol.hpp"

#include <charconv>
#include <cstdio>

namespace swcp {

namespace {

void check_bits(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw ParamError("congestion vector must be non-empty");
  for (std::uint8_t b : bits)
    if (b > 1) throw ParamError("congestion vector entries must be 0 or 1");
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParamError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

// Percent with up to three decimals, held exactly in milli-percent.
std::int64_t parse_milli_percent(std::string_view text) {
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? "" : text.substr(dot + 1);
  if (frac.size() > 3)
    throw ParamError("percentage resolution is 0.001: '" + std::string(text) + "'");
  std::int64_t value = parse_int(whole.empty() ? "0" : whole, "percentage") * 1000;
  if (!frac.empty()) {
    std::int64_t f = parse_int(frac, "percentage fraction");
    for (std::size_t i = frac.size(); i < 3; ++i) f *= 10;
    value += f;
  }
  return value;
}

std::string milli_percent_to_string(std::int64_t milli) {
  std::string s = std::to_string(milli / 1000);
  const std::int64_t frac = milli % 1000;
  if (frac != 0) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%03lld", static_cast<long long>(frac));
    std::string f(buf);
    while (f.back() == '0') f.pop_back();
    s += "." + f;
  }
  return s;
}

std::string_view expect_key(std::string_view field, std::string_view key) {
  if (field.size() <= key.size() + 1 || field.substr(0, key.size()) != key ||
      field[key.size()] != '=')
    throw ParamError("expected '" + std::string(key) + "=<value>' in protocol spec, got '" +
                     std::string(field) + "'");
  return field.substr(key.size() + 1);
}

}  // namespace

ProtocolSpec parse_protocol(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParamError("invalid protocol spec '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);

  ProtocolSpec spec;
  if (kind == "cum") {
    spec = CumulativeM{parse_int(expect_key(rest, "M"), "M")};
  } else if (kind == "pct") {
    spec = Percentage{parse_milli_percent(expect_key(rest, "x"))};
  } else if (kind == "lconsec") {
    spec = LConsecutive{parse_int(expect_key(rest, "L"), "L")};
  } else if (kind == "sw") {
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos)
      throw ParamError("sliding window spec needs 'sw:N=<n>,K=<k>', got '" + std::string(text) +
                       "'");
    spec = SlidingWindow{parse_int(expect_key(rest.substr(0, comma), "N"), "N"),
                         parse_int(expect_key(rest.substr(comma + 1), "K"), "K")};
  } else {
    throw ParamError("unknown protocol kind '" + std::string(kind) + "'");
  }
  validate(spec);
  return spec;
}

std::string to_string(const ProtocolSpec& spec) {
  struct Visitor {
    std::string operator()(const CumulativeM& s) const { return "cum:M=" + std::to_string(s.m); }
    std::string operator()(const Percentage& s) const {
      return "pct:x=" + milli_percent_to_string(s.milli_percent);
    }
    std::string operator()(const LConsecutive& s) const {
      return "lconsec:L=" + std::to_string(s.l);
    }
    std::string operator()(const SlidingWindow& s) const {
      return "sw:N=" + std::to_string(s.n) + ",K=" + std::to_string(s.k);
    }
  };
  return std::visit(Visitor{}, spec);
}

void validate(const ProtocolSpec& spec) {
  struct Visitor {
    void operator()(const CumulativeM& s) const {
      if (s.m < 1) throw ParamError("cumulative protocol requires M >= 1");
    }
    void operator()(const Percentage& s) const {
      if (s.milli_percent < 0 || s.milli_percent > 100000)
        throw ParamError("percentage must lie in [0, 100]");
    }
    void operator()(const LConsecutive& s) const {
      if (s.l < 1) throw ParamError("consecutive protocol requires L >= 1");
    }
    void operator()(const SlidingWindow& s) const {
      if (s.n < 1) throw ParamError("sliding window requires N >= 1");
      if (s.k < 1 || s.k > s.n) throw ParamError("sliding window requires 1 <= K <= N");
    }
  };
  std::visit(Visitor{}, spec);
}

bool is_monotone(const ProtocolSpec& spec) {
  return !std::holds_alternative<Percentage>(spec);
}

namespace {

bool percentage_holds(std::int64_t zeros, std::int64_t n, std::int64_t milli_percent) {
  // zeros >= (x/100) * n, compared exactly: zeros * 100000 >= milli * n.
  return static_cast<__int128>(zeros) * 100000 >= static_cast<__int128>(milli_percent) * n;
}

}  // namespace

EvalResult evaluate(const ProtocolSpec& spec, std::span<const std::uint8_t> bits) {
  validate(spec);
  check_bits(bits);
  const auto n = static_cast<std::int64_t>(bits.size());

  struct Visitor {
    std::span<const std::uint8_t> bits;
    std::int64_t n;

    EvalResult operator()(const CumulativeM& s) const {
      std::int64_t zeros = 0;
      for (std::uint8_t b : bits) zeros += b == 0;
      return {zeros >= s.m ? PeriodStatus::uncongested : PeriodStatus::congested, std::nullopt};
    }
    EvalResult operator()(const Percentage& s) const {
      std::int64_t zeros = 0;
      for (std::uint8_t b : bits) zeros += b == 0;
      return {percentage_holds(zeros, n, s.milli_percent) ? PeriodStatus::uncongested
                                                          : PeriodStatus::congested,
              std::nullopt};
    }
    EvalResult operator()(const LConsecutive& s) const {
      std::int64_t run = 0;
      for (std::int64_t i = 0; i < n; ++i) {
        run = bits[static_cast<std::size_t>(i)] == 0 ? run + 1 : 0;
        if (run >= s.l) return {PeriodStatus::uncongested, i - s.l + 2};  // 1-based start
      }
      return {PeriodStatus::congested, std::nullopt};
    }
    EvalResult operator()(const SlidingWindow& s) const {
      if (n < s.n) return {PeriodStatus::congested, std::nullopt};
      std::int64_t zeros = 0;
      for (std::int64_t i = 0; i < s.n; ++i) zeros += bits[static_cast<std::size_t>(i)] == 0;
      if (zeros >= s.k) return {PeriodStatus::uncongested, 1};
      for (std::int64_t i = s.n; i < n; ++i) {
        zeros += bits[static_cast<std::size_t>(i)] == 0;
        zeros -= bits[static_cast<std::size_t>(i - s.n)] == 0;
        if (zeros >= s.k) return {PeriodStatus::uncongested, i - s.n + 2};
      }
      return {PeriodStatus::congested, std::nullopt};
    }
  };
  return std::visit(Visitor{bits, n}, spec);
}

bool verify_witness(const ProtocolSpec& spec, std::span<const std::uint8_t> bits,
                    std::int64_t witness) {
  validate(spec);
  check_bits(bits);
  const auto n = static_cast<std::int64_t>(bits.size());

  if (const auto* sw = std::get_if<SlidingWindow>(&spec)) {
    if (witness < 1 || witness + sw->n - 1 > n) return false;
    std::int64_t zeros = 0;
    for (std::int64_t i = witness - 1; i < witness - 1 + sw->n; ++i)
      zeros += bits[static_cast<std::size_t>(i)] == 0;
    return zeros >= sw->k;
  }
  if (const auto* lc = std::get_if<LConsecutive>(&spec)) {
    if (witness < 1 || witness + lc->l - 1 > n) return false;
    for (std::int64_t i = witness - 1; i < witness - 1 + lc->l; ++i)
      if (bits[static_cast<std::size_t>(i)] != 0) return false;
    return true;
  }
  throw ParamError("witness verification applies to positional protocols only");
}

RefreshState::RefreshState(const ProtocolSpec& spec) {
  validate(spec);
  if (const auto* sw = std::get_if<SlidingWindow>(&spec))
    tail_.reserve(static_cast<std::size_t>(sw->n > 0 ? sw->n - 1 : 0));
}

EvalResult refresh_evaluate(const ProtocolSpec& spec, RefreshState& state,
                            std::span<const std::uint8_t> new_bits) {
  validate(spec);
  for (std::uint8_t b : new_bits)
    if (b > 1) throw ParamError("congestion vector entries must be 0 or 1");

  struct Visitor {
    RefreshState& st;
    std::span<const std::uint8_t> fresh;

    EvalResult operator()(const CumulativeM& s) const {
      for (std::uint8_t b : fresh) {
        ++st.position_;
        st.zeros_ += b == 0;
      }
      return {st.zeros_ >= s.m ? PeriodStatus::uncongested : PeriodStatus::congested,
              std::nullopt};
    }
    EvalResult operator()(const Percentage& s) const {
      for (std::uint8_t b : fresh) {
        ++st.position_;
        st.zeros_ += b == 0;
      }
      return {percentage_holds(st.zeros_, st.position_, s.milli_percent)
                  ? PeriodStatus::uncongested
                  : PeriodStatus::congested,
              std::nullopt};
    }
    EvalResult operator()(const LConsecutive& s) const {
      for (std::uint8_t b : fresh) {
        ++st.position_;
        st.run_ = b == 0 ? st.run_ + 1 : 0;
        if (!st.witness_ && st.run_ >= s.l) st.witness_ = st.position_ - s.l + 1;
      }
      return {st.witness_ ? PeriodStatus::uncongested : PeriodStatus::congested, st.witness_};
    }
    EvalResult operator()(const SlidingWindow& s) const {
      for (std::uint8_t b : fresh) {
        ++st.position_;
        const std::int64_t window_zeros = st.window_zeros_ + (b == 0);
        if (!st.witness_ && st.position_ >= s.n && window_zeros >= s.k)
          st.witness_ = st.position_ - s.n + 1;
        // Keep exactly the trailing n-1 bits.
        if (s.n > 1) {
          if (static_cast<std::int64_t>(st.tail_.size()) < s.n - 1) {
            st.tail_.push_back(b);
            st.window_zeros_ = window_zeros;
          } else {
            st.window_zeros_ = window_zeros - (st.tail_[st.tail_head_] == 0);
            st.tail_[st.tail_head_] = b;
            st.tail_head_ = (st.tail_head_ + 1) % st.tail_.size();
          }
        }
      }
      return {st.witness_ ? PeriodStatus::uncongested : PeriodStatus::congested, st.witness_};
    }
  };

  // An empty period satisfies nothing yet.
  if (state.position_ == 0 && new_bits.empty()) return {PeriodStatus::congested, std::nullopt};
  return std::visit(Visitor{state, new_bits}, spec);
}

}  // namespace swcp
