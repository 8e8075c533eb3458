// swcp command-line tool: attack bounds and exact probabilities, Monte Carlo
// attack simulation, per-block congestion reports, and deadline resolution
// over recorded chains. All functionality goes through the C API in
// swcp/swcp.h; this file only parses flags and formats output.

#include <swcp/swcp.h>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsageError = 2;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail_status(swcp_status status) {
  const int code = status == SWCP_ERR_PARAM ? kExitUsageError : kExitDataError;
  throw CliError{code, swcp_last_error()};
}

void check(swcp_status status) {
  if (status != SWCP_OK) fail_status(status);
}

std::string format_prob(swcp_prob p, bool clamp_to_one) {
  char buf[48];
  check(swcp_prob_format(p, clamp_to_one ? 1 : 0, buf, sizeof(buf)));
  return buf;
}

std::string format_rate(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

// "A", "A:B" (step 1), or "A:B:S"; plain comma lists also accepted.
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    double start = 0, stop = 0, step = 1;
    std::istringstream in(text);
    char sep1 = 0, sep2 = 0;
    if (!(in >> start >> sep1 >> stop) || sep1 != ':')
      throw CliError{kExitUsageError, "bad range '" + text + "' (want start:stop[:step])"};
    if (in >> sep2 >> step) {
      if (sep2 != ':' || !(step > 0))
        throw CliError{kExitUsageError, "bad range step in '" + text + "'"};
    }
    for (double v = start; v <= stop + 1e-9; v += step) values.push_back(v);
  } else {
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty()) continue;
      try {
        values.push_back(std::stod(item));
      } catch (...) {
        throw CliError{kExitUsageError, "bad value '" + item + "' in '" + text + "'"};
      }
    }
  }
  if (values.empty()) throw CliError{kExitUsageError, "empty value list '" + text + "'"};
  return values;
}

std::vector<swcp_direction> parse_directions(const std::string& text) {
  if (text == "uncongestion") return {SWCP_UNCONGESTION};
  if (text == "congestion") return {SWCP_CONGESTION};
  if (text == "both") return {SWCP_UNCONGESTION, SWCP_CONGESTION};
  throw CliError{kExitUsageError,
                 "direction must be 'uncongestion', 'congestion', or 'both', got '" + text + "'"};
}

const char* direction_name(swcp_direction d) {
  return d == SWCP_UNCONGESTION ? "uncongestion" : "congestion";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitDataError, "cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw CliError{kExitDataError, "cannot write '" + out_path + "'"};
  out << content;
}

using ChainPtr = std::unique_ptr<swcp_chain, decltype(&swcp_chain_free)>;

ChainPtr load_chain(const std::string& path, const std::string& format_flag) {
  const std::string data = read_file(path);
  std::string format = format_flag;
  if (format == "auto") {
    // base-fee records carry a "base_fee" key on the first line.
    const auto first_line = data.substr(0, data.find('\n'));
    format = first_line.find("\"base_fee\"") != std::string::npos ? "base-fee" : "tx-list";
  }
  swcp_chain* chain = nullptr;
  check(swcp_chain_parse(data.data(), data.size(), format.c_str(), &chain));
  return ChainPtr(chain, &swcp_chain_free);
}

// ---- subcommands ----

struct BoundsArgs {
  std::int64_t window = 0, k = 0;
  std::string n_range, direction = "uncongestion", out;
  double alpha = 0.0, p = 0.0;
};

int run_bounds(const BoundsArgs& args) {
  std::string csv = "n,direction,bound\n";
  for (const auto dir : parse_directions(args.direction)) {
    for (const double n_value : parse_values(args.n_range)) {
      const auto n = static_cast<std::int64_t>(std::llround(n_value));
      swcp_prob bound;
      check(swcp_sw_attack_bound(dir, args.window, args.k, n, args.alpha, args.p, &bound));
      csv += std::to_string(n);
      csv += ',';
      csv += direction_name(dir);
      csv += ',';
      csv += format_prob(bound, true);
      csv += '\n';
    }
  }
  emit(args.out, csv);
  return kExitOk;
}

struct MarkovArgs {
  std::string l_range, direction = "uncongestion", out;
  std::int64_t n = 0;
  double alpha = 0.0, p = 0.0;
};

int run_markov(const MarkovArgs& args) {
  std::string csv = "L,direction,probability\n";
  for (const auto dir : parse_directions(args.direction)) {
    for (const double l_value : parse_values(args.l_range)) {
      const auto run_length = static_cast<std::int64_t>(std::llround(l_value));
      swcp_prob prob;
      check(swcp_consec_attack_prob(dir, run_length, args.n, args.alpha, args.p, &prob));
      csv += std::to_string(run_length);
      csv += ',';
      csv += direction_name(dir);
      csv += ',';
      csv += format_prob(prob, false);
      csv += '\n';
    }
  }
  emit(args.out, csv);
  return kExitOk;
}

struct SimulateArgs {
  std::string spec, direction = "uncongestion", n_range, axis = "n", values, out;
  double alpha = 0.0, p = 0.0;
  std::uint64_t trials = 100000, seed = 0;
};

int run_simulate(const SimulateArgs& args) {
  check(swcp_protocol_validate(args.spec.c_str()));
  const auto directions = parse_directions(args.direction);
  if (directions.size() != 1)
    throw CliError{kExitUsageError, "simulate runs one direction at a time"};

  // Default sweep axis is the period length; --axis/--values override.
  std::vector<double> values;
  std::int64_t base_n = 0;
  if (args.axis == "n") {
    values = parse_values(args.values.empty() ? args.n_range : args.values);
    base_n = static_cast<std::int64_t>(std::llround(values.front()));
  } else {
    if (args.values.empty())
      throw CliError{kExitUsageError, "--values is required for axis '" + args.axis + "'"};
    values = parse_values(args.values);
    const auto base_values = parse_values(args.n_range);
    if (base_values.size() != 1)
      throw CliError{kExitUsageError, "--n must be a single value when sweeping another axis"};
    base_n = static_cast<std::int64_t>(std::llround(base_values.front()));
  }

  std::vector<swcp_attack_estimate> estimates(values.size());
  check(swcp_sweep_attack(args.spec.c_str(), directions.front(), base_n, args.alpha, args.p,
                          args.trials, args.seed, args.axis.c_str(), values.data(), values.size(),
                          estimates.data()));

  std::string csv = "axis_value,success_rate,std_error,trials\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& est = estimates[i];
    csv += format_rate(values[i]);
    csv += ',';
    csv += format_rate(est.success_rate);
    csv += ',';
    csv += format_rate(est.std_error);
    csv += ',';
    csv += std::to_string(est.trials);
    csv += '\n';
    if (est.successes == 0) {
      const double bound = 3.0 / static_cast<double>(est.trials);
      std::cerr << "note: zero successes at " << args.axis << "=" << format_rate(values[i])
                << "; one-sided 95% bound 3/trials = " << format_rate(bound > 1.0 ? 1.0 : bound)
                << "\n";
    }
  }
  emit(args.out, csv);
  return kExitOk;
}

// Recorded reference values for the two-week Ethereum-scale configuration
// (m_hat = 90300, alpha = 0.33, p = 0.85 resp. 0.15). The uncongestion
// column is the union bound at the full extension n = m_hat; the congestion
// column is its single-window worst case n = N.
struct ReferenceRow {
  std::int64_t window, k;
  const char* uncongestion;
  const char* congestion;
};

constexpr ReferenceRow kReferenceRows[] = {
    {6450, 3225, "<1e-323", "1.44e-29"},
    {3225, 1612, "1.26e-10", "8.06e-16"},
    {1612, 815, "7.14e-5", "1.08e-7"},
    {806, 421, "8.87e-3", "3.16e-3"},
};

// log10 of a scientific literal, safe below double underflow ("1e-323").
double log10_of_literal(const std::string& text) {
  const auto e = text.find_first_of("eE");
  const double mantissa = std::stod(e == std::string::npos ? text : text.substr(0, e));
  const double exponent = e == std::string::npos ? 0.0 : std::stod(text.substr(e + 1));
  return std::log10(mantissa) + exponent;
}

// Agreement to two significant figures: within half a unit in the second
// significant place of the reference.
bool matches_reference(swcp_prob computed, const std::string& reference) {
  if (reference.rfind('<', 0) == 0)
    return swcp_prob_log10(computed) < log10_of_literal(reference.substr(1));
  const double ref = std::stod(reference);
  const double value = swcp_prob_to_double(computed);
  return std::abs(value - ref) <= 0.05 * std::pow(10.0, std::floor(std::log10(ref)));
}

int run_reproduce_table(const std::string& out_path) {
  constexpr std::int64_t kMHat = 90300;
  constexpr double kAlpha = 0.33;
  std::string csv =
      "N,K,uncongestion_computed,uncongestion_reference,uncongestion_match,"
      "congestion_computed,congestion_reference,congestion_match\n";
  for (const auto& row : kReferenceRows) {
    swcp_prob unc, con;
    check(swcp_sw_attack_bound(SWCP_UNCONGESTION, row.window, row.k, kMHat, kAlpha, 0.85, &unc));
    check(swcp_sw_attack_bound(SWCP_CONGESTION, row.window, row.k, row.window, kAlpha, 0.15,
                               &con));
    csv += std::to_string(row.window) + "," + std::to_string(row.k) + ",";
    csv += format_prob(unc, true) + "," + row.uncongestion + ",";
    csv += matches_reference(unc, row.uncongestion) ? "match," : "MISMATCH,";
    csv += format_prob(con, true) + "," + row.congestion + ",";
    csv += matches_reference(con, row.congestion) ? "match\n" : "MISMATCH\n";
  }
  emit(out_path, csv);
  return kExitOk;
}

struct DeadlineArgs {
  std::string chain_path, challenge_path, format = "auto", out;
  std::optional<std::int64_t> response;
};

int run_deadline(const DeadlineArgs& args) {
  const ChainPtr chain = load_chain(args.chain_path, args.format);
  const std::string challenge = read_file(args.challenge_path);

  char* json = nullptr;
  if (args.response) {
    int accepted = 0;
    check(swcp_adjudicate_response(chain.get(), challenge.c_str(), *args.response, &accepted,
                                   &json));
    std::string result = std::string("{\"accepted\":") + (accepted ? "true" : "false") +
                         ",\"resolution\":" + json + "}\n";
    swcp_string_free(json);
    emit(args.out, result);
  } else {
    check(swcp_resolve_deadline(chain.get(), challenge.c_str(), &json));
    std::string result = std::string(json) + "\n";
    swcp_string_free(json);
    emit(args.out, result);
  }
  return kExitOk;
}

struct SearchKArgs {
  std::int64_t window = 0, m_hat = 0;
  double alpha = 0.0, p_uncongestion = 0.85, p_congestion = 0.15, target = 0.01;
  std::string out;
};

int run_search_k(const SearchKArgs& args) {
  std::int64_t best_k = 0;
  swcp_prob unc, con;
  int meets = 0;
  check(swcp_search_k(args.window, args.alpha, args.p_uncongestion, args.p_congestion,
                      args.m_hat, args.target, &best_k, &unc, &con, &meets));
  std::string csv = "N,alpha,best_K,uncongestion_bound,congestion_bound,meets_target\n";
  csv += std::to_string(args.window) + "," + format_rate(args.alpha) + "," +
         std::to_string(best_k) + "," + format_prob(unc, true) + "," + format_prob(con, true) +
         "," + (meets ? "true" : "false") + "\n";
  emit(args.out, csv);
  return kExitOk;
}

struct SignalArgs {
  std::string chain_path, format = "auto", kind = "threshold", out;
  double theta = 0.0, gamma = 0.0, fee = 0.0, max_base_fee = 0.0;
};

int run_signal(const SignalArgs& args) {
  const ChainPtr chain = load_chain(args.chain_path, args.format);

  std::ostringstream signal;
  signal << "{\"kind\":\"" << args.kind << "\"";
  if (args.kind == "threshold")
    signal << ",\"theta\":" << args.theta << ",\"gamma\":" << args.gamma;
  else if (args.kind == "lowest-fee-density" || args.kind == "highest-fee-density")
    signal << ",\"theta\":" << args.theta;
  else if (args.kind == "nonzero-occupancy")
    signal << ",\"gamma\":" << args.gamma;
  else if (args.kind == "fee")
    signal << ",\"fee\":" << args.fee << ",\"gamma\":" << args.gamma;
  else if (args.kind == "base-fee")
    signal << ",\"max_base_fee\":" << args.max_base_fee;
  else
    throw CliError{kExitUsageError, "unknown signal kind '" + args.kind + "'"};
  signal << "}";

  char* csv = nullptr;
  check(swcp_chain_signal_report(chain.get(), signal.str().c_str(), &csv));
  std::string result(csv);
  swcp_string_free(csv);
  emit(args.out, result);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "congestion-aware challenge-response deadlines: attack analysis and deadline resolution"};
  app.require_subcommand(1);

  BoundsArgs bounds;
  auto* cmd_bounds = app.add_subcommand(
      "bounds", "sliding-window attack success upper bounds over a period-length range");
  cmd_bounds->add_option("--N", bounds.window, "window size")->required();
  cmd_bounds->add_option("--K", bounds.k, "uncongested blocks required in a window")->required();
  cmd_bounds->add_option("--n", bounds.n_range, "period length or range start:stop[:step]")
      ->required();
  cmd_bounds->add_option("--alpha", bounds.alpha, "adversary mining share")->required();
  cmd_bounds->add_option("--p", bounds.p, "per-block congestion probability")->required();
  cmd_bounds->add_option("--direction", bounds.direction, "uncongestion|congestion|both");
  cmd_bounds->add_option("--out", bounds.out, "output path (default stdout)");

  MarkovArgs markov;
  auto* cmd_markov = app.add_subcommand(
      "markov", "exact L-consecutive attack success probabilities over a range of L");
  cmd_markov->add_option("--L", markov.l_range, "run length or range start:stop[:step]")
      ->required();
  cmd_markov->add_option("--n", markov.n, "period length")->required();
  cmd_markov->add_option("--alpha", markov.alpha, "adversary mining share")->required();
  cmd_markov->add_option("--p", markov.p, "per-block congestion probability")->required();
  cmd_markov->add_option("--direction", markov.direction, "uncongestion|congestion|both");
  cmd_markov->add_option("--out", markov.out, "output path (default stdout)");

  SimulateArgs simulate;
  auto* cmd_simulate =
      app.add_subcommand("simulate", "Monte Carlo attack success estimation (CSV sweep)");
  cmd_simulate->add_option("--spec", simulate.spec, "protocol spec, e.g. sw:N=144,K=89")
      ->required();
  cmd_simulate->add_option("--direction", simulate.direction, "uncongestion|congestion")
      ->required();
  cmd_simulate->add_option("--n", simulate.n_range, "period length or range")->required();
  cmd_simulate->add_option("--alpha", simulate.alpha, "adversary mining share")->required();
  cmd_simulate->add_option("--p", simulate.p, "per-block congestion probability")->required();
  cmd_simulate->add_option("--trials", simulate.trials, "samples per point (default 100000)");
  cmd_simulate->add_option("--seed", simulate.seed, "base seed (default 0)");
  cmd_simulate->add_option("--axis", simulate.axis, "sweep axis: n|K|L|alpha (default n)");
  cmd_simulate->add_option("--values", simulate.values, "axis values (range or comma list)");
  cmd_simulate->add_option("--out", simulate.out, "output path (default stdout)");

  std::string table_out;
  auto* cmd_table = app.add_subcommand(
      "reproduce-table", "recompute the reference bound table and flag mismatches");
  cmd_table->add_option("--out", table_out, "output path (default stdout)");

  DeadlineArgs deadline;
  auto* cmd_deadline =
      app.add_subcommand("deadline", "resolve a challenge deadline over a recorded chain");
  cmd_deadline->add_option("--chain", deadline.chain_path, "JSON-Lines chain file")->required();
  cmd_deadline->add_option("--challenge", deadline.challenge_path, "challenge JSON file")
      ->required();
  cmd_deadline->add_option("--format", deadline.format, "auto|tx-list|base-fee (default auto)");
  std::int64_t response_height = 0;
  auto* response_opt = cmd_deadline->add_option("--response", response_height,
                                                "adjudicate a response at this height");
  cmd_deadline->add_option("--out", deadline.out, "output path (default stdout)");

  SearchKArgs search;
  auto* cmd_search = app.add_subcommand(
      "search-k", "find the window threshold K minimizing the worse attack bound");
  cmd_search->add_option("--N", search.window, "window size")->required();
  cmd_search->add_option("--alpha", search.alpha, "adversary mining share")->required();
  cmd_search->add_option("--m-hat", search.m_hat, "maximum extension in blocks")->required();
  cmd_search->add_option("--p-uncongestion", search.p_uncongestion,
                         "congestion probability for the uncongestion attack (default 0.85)");
  cmd_search->add_option("--p-congestion", search.p_congestion,
                         "congestion probability for the congestion attack (default 0.15)");
  cmd_search->add_option("--target", search.target, "target success bound (default 0.01)");
  cmd_search->add_option("--out", search.out, "output path (default stdout)");

  SignalArgs signal;
  auto* cmd_signal =
      app.add_subcommand("signal", "per-block congestion report for an ingested chain");
  cmd_signal->add_option("--chain", signal.chain_path, "JSON-Lines chain file")->required();
  cmd_signal->add_option("--format", signal.format, "auto|tx-list|base-fee (default auto)");
  cmd_signal->add_option("--kind", signal.kind,
                         "threshold|lowest-fee-density|highest-fee-density|nonzero-occupancy|"
                         "fee|base-fee (default threshold)");
  cmd_signal->add_option("--theta", signal.theta, "fee density threshold");
  cmd_signal->add_option("--gamma", signal.gamma, "capacity fraction");
  cmd_signal->add_option("--fee", signal.fee, "total-fee threshold");
  cmd_signal->add_option("--max-base-fee", signal.max_base_fee, "base fee cap");
  cmd_signal->add_option("--out", signal.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (cmd_bounds->parsed()) return run_bounds(bounds);
    if (cmd_markov->parsed()) return run_markov(markov);
    if (cmd_simulate->parsed()) return run_simulate(simulate);
    if (cmd_table->parsed()) return run_reproduce_table(table_out);
    if (cmd_deadline->parsed()) {
      if (response_opt->count() > 0) deadline.response = response_height;
      return run_deadline(deadline);
    }
    if (cmd_search->parsed()) return run_search_k(search);
    if (cmd_signal->parsed()) return run_signal(signal);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsageError;
}
