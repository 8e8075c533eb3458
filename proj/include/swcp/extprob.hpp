#pragma once

// Non-negative floating values with an extended binary exponent range.
// Attack probabilities in the regimes analyzed here fall far below the
// smallest positive double (~4.9e-324), so plain doubles flush them to zero.
// An ExtProb keeps a double mantissa in [1,2) plus a 64-bit base-2 exponent,
// which preserves ~15 significant digits at any magnitude we care about.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "swcp/errors.hpp"

namespace swcp {

struct ExtProb {
  double mantissa{0.0};      // 0, or in [1, 2)
  std::int64_t exponent{0};  // value = mantissa * 2^exponent

  static ExtProb zero() { return {}; }
  static ExtProb one() { return {1.0, 0}; }

  static ExtProb from_double(double x) {
    if (std::isnan(x) || x < 0.0) throw ParamError("ExtProb requires a non-negative value");
    if (x == 0.0) return zero();
    int e = 0;
    const double f = std::frexp(x, &e);  // f in [0.5, 1)
    return {2.0 * f, static_cast<std::int64_t>(e) - 1};
  }

  // e^{ln_x}. The exponent reduction uses a split ln2 so that the residual
  // stays accurate even for |ln_x| in the millions.
  static ExtProb from_ln(double ln_x) {
    if (std::isnan(ln_x)) throw ParamError("ExtProb::from_ln: nan");
    if (ln_x == -std::numeric_limits<double>::infinity()) return zero();
    constexpr double kInvLn2 = 1.4426950408889634074;
    constexpr double kLn2Hi = 6.93147180369123816490e-01;  // high bits exact
    constexpr double kLn2Lo = 1.90821492927058770002e-10;
    auto e = static_cast<std::int64_t>(std::floor(ln_x * kInvLn2));
    double r = ln_x - static_cast<double>(e) * kLn2Hi - static_cast<double>(e) * kLn2Lo;
    while (r < 0.0) {
      --e;
      r = ln_x - static_cast<double>(e) * kLn2Hi - static_cast<double>(e) * kLn2Lo;
    }
    while (r >= 0.6931471805599453) {
      ++e;
      r = ln_x - static_cast<double>(e) * kLn2Hi - static_cast<double>(e) * kLn2Lo;
    }
    return {std::exp(r), e};
  }

  bool is_zero() const { return mantissa == 0.0; }

  // Clamps to the double range: huge -> +inf, tiny -> 0.
  double to_double() const {
    if (is_zero()) return 0.0;
    if (exponent > 1023) return std::numeric_limits<double>::infinity();
    if (exponent < -1070) return 0.0;
    return std::ldexp(mantissa, static_cast<int>(exponent));
  }

  double log10() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    constexpr double kLog10_2 = 0.30102999566398119521;
    return std::log10(mantissa) + static_cast<double>(exponent) * kLog10_2;
  }

  double ln() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    constexpr double kLn2 = 0.69314718055994530942;
    return std::log(mantissa) + static_cast<double>(exponent) * kLn2;
  }

  friend ExtProb operator*(ExtProb a, ExtProb b) {
    if (a.is_zero() || b.is_zero()) return zero();
    double m = a.mantissa * b.mantissa;  // in [1, 4)
    std::int64_t e = a.exponent + b.exponent;
    if (m >= 2.0) {
      m *= 0.5;
      ++e;
    }
    return {m, e};
  }

  friend ExtProb operator+(ExtProb a, ExtProb b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.exponent < b.exponent) std::swap(a, b);
    const std::int64_t d = a.exponent - b.exponent;
    if (d > 64) return a;
    // b.mantissa * 2^-d via an exact power-of-two scale.
    const double scale = std::bit_cast<double>(static_cast<std::uint64_t>(1023 - d) << 52);
    double m = a.mantissa + b.mantissa * scale;
    std::int64_t e = a.exponent;
    if (m >= 2.0) {
      m *= 0.5;
      ++e;
    }
    return {m, e};
  }

  ExtProb pow_int(std::uint64_t k) const {
    ExtProb result = one();
    ExtProb base = *this;
    while (k > 0) {
      if (k & 1) result = result * base;
      base = base * base;
      k >>= 1;
    }
    return result;
  }

  friend bool operator==(const ExtProb& a, const ExtProb& b) {
    return a.mantissa == b.mantissa && (a.is_zero() || a.exponent == b.exponent);
  }

  friend bool operator<(const ExtProb& a, const ExtProb& b) {
    if (a.is_zero()) return !b.is_zero();
    if (b.is_zero()) return false;
    if (a.exponent != b.exponent) return a.exponent < b.exponent;
    return a.mantissa < b.mantissa;
  }
  friend bool operator>(const ExtProb& a, const ExtProb& b) { return b < a; }
  friend bool operator<=(const ExtProb& a, const ExtProb& b) { return !(b < a); }
  friend bool operator>=(const ExtProb& a, const ExtProb& b) { return !(a < b); }
};

// Scientific notation with 6 significant digits ("1.44006e-29"). Values below
// the 1e-300 report floor render as "<1e-300"; with clamp_to_one set, values
// above 1 (union bounds can exceed 1) render as 1.
std::string format_probability(const ExtProb& p, bool clamp_to_one);

}  // namespace swcp
