#include "swcp/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace swcp {

namespace {

void check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0))
    throw ParamError(std::string(name) + " must lie in [0, 1]");
}

struct StepProbs {
  double advance;  // block counts as uncongested, run grows
  double reset;    // block counts as congested, run restarts
};

StepProbs step_probs(AttackDirection direction, double alpha, double p) {
  if (direction == AttackDirection::uncongestion) {
    // Adversary blocks are forced uncongested; honest blocks follow p.
    return {alpha + (1.0 - alpha) * (1.0 - p), (1.0 - alpha) * p};
  }
  // Adversary blocks are forced congested; only honest uncongested advance.
  return {(1.0 - alpha) * (1.0 - p), alpha + (1.0 - alpha) * p};
}

// Shared absorbing-chain walk; returns the full state vector after n steps.
std::vector<ExtProb> walk(AttackDirection direction, std::int64_t run_length, std::int64_t n,
                          double alpha, double p) {
  if (run_length < 1) throw ParamError("run length must be at least 1");
  if (n < 1) throw ParamError("period length must be at least 1");
  check_probability(alpha, "alpha");
  check_probability(p, "p");

  const auto [advance, reset] = step_probs(direction, alpha, p);
  const ExtProb s = ExtProb::from_double(advance);
  const ExtProb r = ExtProb::from_double(reset);
  const auto l = static_cast<std::size_t>(run_length);

  std::vector<ExtProb> v(l + 1, ExtProb::zero());
  v[0] = ExtProb::one();
  for (std::int64_t step = 0; step < n; ++step) {
    ExtProb transient = ExtProb::zero();
    for (std::size_t i = 0; i < l; ++i) transient = transient + v[i];
    v[l] = v[l] + v[l - 1] * s;
    for (std::size_t j = l - 1; j >= 1; --j) v[j] = v[j - 1] * s;
    v[0] = transient * r;
  }
  return v;
}

}  // namespace

std::vector<std::vector<double>> build_matrix(const MarkovSpec& spec) {
  if (spec.run_length < 1) throw ParamError("run length must be at least 1");
  check_probability(spec.alpha, "alpha");
  check_probability(spec.p, "p");

  const auto [advance, reset] = step_probs(spec.direction, spec.alpha, spec.p);
  const auto l = static_cast<std::size_t>(spec.run_length);
  std::vector<std::vector<double>> t(l + 1, std::vector<double>(l + 1, 0.0));
  for (std::size_t i = 0; i < l; ++i) {
    t[i][0] = reset;
    t[i][i + 1] = advance;
  }
  t[l][l] = 1.0;
  return t;
}

ExtProb uncongestion_attack_prob_consec(std::int64_t run_length, std::int64_t n, double alpha,
                                        double p) {
  const auto v = walk(AttackDirection::uncongestion, run_length, n, alpha, p);
  return v.back();  // absorbed: some run of run_length uncongested blocks appeared
}

ExtProb congestion_attack_prob_consec(std::int64_t run_length, std::int64_t n, double alpha,
                                      double p) {
  const auto v = walk(AttackDirection::congestion, run_length, n, alpha, p);
  // Success = never absorbed. Summing the transient mass directly avoids the
  // 1 - (1 - tiny) cancellation.
  ExtProb transient = ExtProb::zero();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) transient = transient + v[i];
  return transient;
}

ExtProb binomial_tail(std::int64_t n, double p, std::int64_t k, TailSide side) {
  if (n < 0) throw ParamError("binomial n must be non-negative");
  check_probability(p, "p");
  if (k < 0 || k > n + 1) throw ParamError("binomial k must lie in [0, n+1]");

  // Summation range [lo, hi] of P[X = j].
  const std::int64_t lo = side == TailSide::ge ? k : 0;
  const std::int64_t hi = side == TailSide::ge ? n : k - 1;
  if (lo > hi) return ExtProb::zero();
  if (lo == 0 && hi == n) return ExtProb::one();

  if (p == 0.0) return (lo == 0) ? ExtProb::one() : ExtProb::zero();
  if (p == 1.0) return (hi == n) ? ExtProb::one() : ExtProb::zero();

  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  auto log_term = [&](std::int64_t j) {
    const auto jd = static_cast<double>(j);
    const auto nd = static_cast<double>(n);
    return lgn - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0) + jd * lp + (nd - jd) * lq;
  };

  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t j = lo; j <= hi; ++j) {
    const double lt = log_term(j);
    logs[static_cast<std::size_t>(j - lo)] = lt;
    max_log = std::max(max_log, lt);
  }

  // Kahan-compensated sum of exp(log - max_log).
  double sum = 0.0, comp = 0.0;
  for (const double lt : logs) {
    const double term = std::exp(lt - max_log);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return ExtProb::from_ln(max_log) * ExtProb::from_double(sum);
}

namespace {

void check_window(std::int64_t window, std::int64_t k, std::int64_t n) {
  if (window < 1) throw ParamError("window size must be at least 1");
  if (k < 1 || k > window) throw ParamError("threshold K must lie in [1, N]");
  if (n < window) throw ParamError("period shorter than window (n < N)");
}

}  // namespace

ExtProb uncongestion_bound_sw(std::int64_t window, std::int64_t k, std::int64_t n, double alpha,
                              double p) {
  check_window(window, k, n);
  check_probability(alpha, "alpha");
  check_probability(p, "p");
  const double q = alpha + (1.0 - p) * (1.0 - alpha);
  const ExtProb window_prob = binomial_tail(window, q, k, TailSide::ge);
  return window_prob * ExtProb::from_double(static_cast<double>(n - window + 1));
}

ExtProb congestion_bound_sw(std::int64_t window, std::int64_t k, std::int64_t n, double alpha,
                            double p) {
  check_window(window, k, n);
  check_probability(alpha, "alpha");
  check_probability(p, "p");
  const double q = (1.0 - p) * (1.0 - alpha);
  const ExtProb window_prob = binomial_tail(window, q, k, TailSide::lt);
  return window_prob.pow_int(static_cast<std::uint64_t>(n / window));
}

SearchKResult search_k(std::int64_t window, double alpha, double p_uncongestion,
                       double p_congestion, std::int64_t m_hat, double target) {
  if (window < 1) throw ParamError("window size must be at least 1");
  if (m_hat < window) throw ParamError("maximum extension must be at least the window size");
  if (!(target >= 0.0)) throw ParamError("target must be non-negative");

  SearchKResult best;
  ExtProb best_max;
  for (std::int64_t k = 1; k <= window; ++k) {
    const ExtProb unc = uncongestion_bound_sw(window, k, m_hat, alpha, p_uncongestion);
    const ExtProb con = congestion_bound_sw(window, k, window, alpha, p_congestion);
    const ExtProb worse = std::max(unc, con);
    if (best.best_k == 0 || worse < best_max) {
      best_max = worse;
      best = {k, unc, con, false};
    }
  }
  // A union bound above 1 still certifies probability <= 1.
  const ExtProb capped = std::min(best_max, ExtProb::one());
  best.meets_target = capped <= ExtProb::from_double(target);
  return best;
}

}  // namespace swcp
