#include "swcp/extprob.hpp"

#include <cmath>
#include <cstdio>

namespace swcp {

std::string format_probability(const ExtProb& p, bool clamp_to_one) {
  ExtProb v = p;
  if (clamp_to_one && v > ExtProb::one()) v = ExtProb::one();
  if (v.is_zero()) return "0.00000e+00";

  static const ExtProb kFloor = ExtProb::from_double(1e-300);
  if (v < kFloor) return "<1e-300";

  const double lg = v.log10();
  auto dec_exp = static_cast<long long>(std::floor(lg));
  double mant10 = std::pow(10.0, lg - static_cast<double>(dec_exp));
  // Rounding to 5 decimals can push the mantissa to 10.
  if (mant10 >= 9.999995) {
    mant10 /= 10.0;
    ++dec_exp;
  }
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.5fe%+03lld", mant10, dec_exp);
  return buf;
}

}  // namespace swcp
