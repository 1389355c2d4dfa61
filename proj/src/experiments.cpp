#include "vinolab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "vinolab/bounds.hpp"
#include "vinolab/circle.hpp"
#include "vinolab/congruence.hpp"
#include "vinolab/expsum.hpp"
#include "vinolab/io.hpp"
#include "vinolab/tarry.hpp"

namespace vinolab {

using nlohmann::json;

namespace {

const std::pair<Command, const char*> kCommandNames[] = {
    {Command::kCount, "count"},           {Command::kMoment, "moment"},   {Command::kDftCheck, "dft-check"},
    {Command::kExpsum, "expsum"},         {Command::kCongruence, "congruence"}, {Command::kSingular, "singular"},
    {Command::kWaring, "waring"},         {Command::kTarry, "tarry"},     {Command::kBounds, "bounds"},
    {Command::kVerify, "verify"}};

[[noreturn]] void invalid(const std::string& what) { throw ConfigInvalid(what); }

std::string real(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

/// Parameter access with uniform error messages.
class Params {
 public:
  Params(const json& j, Command c) : j_(j), cmd_(to_string(c)) {}

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const {
    if (!has(key)) invalid(cmd_ + ": missing parameter \"" + key + "\"");
    return j_.at(key);
  }

  std::int64_t integer(const char* key) const {
    const auto& v = raw(key);
    if (!v.is_number_integer()) invalid(cmd_ + ": \"" + key + "\" must be an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const char* key, std::int64_t fallback) const { return has(key) ? integer(key) : fallback; }

  int small(const char* key) const {
    const auto v = integer(key);
    if (v < -1000000 || v > 1000000) invalid(cmd_ + ": \"" + key + "\" out of range");
    return static_cast<int>(v);
  }
  int small(const char* key, int fallback) const { return has(key) ? small(key) : fallback; }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_number()) invalid(cmd_ + ": \"" + key + "\" must be a number");
    return v.get<double>();
  }

  std::string text(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_string()) invalid(cmd_ + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
  }

  /// An integer or an array of integers.
  std::vector<std::int64_t> integers(const char* key) const {
    const auto& v = raw(key);
    if (v.is_number_integer()) return {v.get<std::int64_t>()};
    if (!v.is_array() || v.empty()) invalid(cmd_ + ": \"" + key + "\" must be an integer or a nonempty array");
    std::vector<std::int64_t> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) invalid(cmd_ + ": \"" + key + "\" must contain integers");
      out.push_back(x.get<std::int64_t>());
    }
    return out;
  }

  ExponentSet exponents(const char* key) const {
    const auto v = integers(key);
    std::vector<int> e;
    for (auto x : v) {
      if (x < 1 || x > ExponentSet::kMaxExponent) invalid(cmd_ + ": exponents must lie in [1, 32]");
      e.push_back(static_cast<int>(x));
    }
    try {
      return ExponentSet(e);
    } catch (const InvalidArgument& err) {
      invalid(cmd_ + ": " + err.what());
    }
  }

  /// "E" or "exponent_set", else {1..k}.
  ExponentSet exponents_or_full() const {
    if (has("E")) return exponents("E");
    if (has("exponent_set")) return exponents("exponent_set");
    return ExponentSet::full(small("k"));
  }

  std::string dump() const { return j_.dump(); }

 private:
  const json& j_;
  std::string cmd_;
};

std::string csv(const std::string& comment, const std::string& header, const std::vector<std::string>& rows) {
  std::string out = "# " + comment + "\n" + header + "\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

std::string join(const std::vector<std::int64_t>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::to_string(v[i]);
  return out;
}

std::string exponent_label(const ExponentSet& e) {
  return join(std::vector<std::int64_t>(e.begin(), e.end()), " ");
}

// --- commands ---------------------------------------------------------------

RunResult run_count(const ExperimentConfig& c, const Params& p) {
  const auto opt = c.engine();
  RunResult r{"csv", "", {}};
  std::vector<std::string> rows;
  if (p.has("spec")) {
    const SystemSpec spec = spec_from_json(p.raw("spec"));
    const Count n = constrained_count(spec, opt);
    const auto& b = spec.blocks.front();
    rows.push_back(count_csv_row(c.name, spec.total_variables(), spec.exponents.max(), b.interval.start, b.interval.length, n));
  } else {
    const ExponentSet e = p.exponents_or_full();
    const int s = p.small("s");
    const std::int64_t start = p.integer("start", 1);
    for (auto X : p.has("X") ? p.integers("X") : std::vector<std::int64_t>{p.integer("length")}) {
      if (X < 1) invalid("count: X must be positive");
      const Count J = mean_value(e, s, {start, X}, opt);
      rows.push_back(count_csv_row(c.name, s, e.max(), start, X, J));
    }
  }
  r.text = csv("solution counts of the paired power-sum system (spec, variables per side s, degree k, interval)",
               kCountCsvHeader, rows);
  return r;
}

RunResult run_moment(const ExperimentConfig& c, const Params& p) {
  const int k = p.small("k"), s = p.small("s");
  const auto Xs = p.integers("X");
  std::vector<std::string> rows;
  std::vector<double> xs;
  std::vector<Count> js;
  for (auto X : Xs) {
    const Count J = vinogradov_mean_value(k, s, X, c.engine());
    rows.push_back(std::to_string(X) + "," + J.str() + "," + real(asymptotic_ratio(k, s, X, J)));
    xs.push_back(static_cast<double>(X));
    js.push_back(J);
  }
  RunResult r{"csv", "", {}};
  r.text = csv("J_{s,k}(X) on [1, X] and J / X^(2s - k(k+1)/2), s=" + std::to_string(s) + " k=" + std::to_string(k),
               "X,J,ratio", rows);
  if (xs.size() >= 2) r.text += "# slope," + real(log_log_slope(xs, js)) + "\n";
  return r;
}

RunResult run_dft_check(const ExperimentConfig& c, const Params& p) {
  const ExponentSet e = p.exponents_or_full();
  const int s = p.small("s");
  RunResult r{"csv", "", {}};
  std::vector<std::string> rows;
  for (auto X : p.integers("X")) {
    const Count dft = dft_mean_value(e, s, X);
    const Count direct = mean_value(e, s, {1, X}, c.engine());
    const bool match = dft == direct;
    rows.push_back(exponent_label(e) + "," + std::to_string(s) + "," + std::to_string(X) + "," + dft.str() + "," +
                   direct.str() + "," + (match ? "1" : "0"));
    if (!match) r.failures.push_back("dft-check mismatch at X=" + std::to_string(X));
  }
  r.text = csv("mean value by finite orthogonality against the convolution engine", "E,s,X,dft,direct,match", rows);
  return r;
}

/// "p/q", an integer or a finite decimal, all exact.
Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const BigInt num(text.substr(0, slash)), den(text.substr(slash + 1));
      if (den == 0) invalid("expsum: zero denominator in \"" + text + "\"");
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() || digits == "-") invalid("expsum: malformed number \"" + text + "\"");
    const auto scale = static_cast<unsigned>(text.size() - dot - 1);
    return Rational(BigInt(digits), ipow(BigInt(10), scale));
  } catch (const std::runtime_error&) {
    invalid("expsum: malformed number \"" + text + "\"");
  }
}

RunResult run_expsum(const ExperimentConfig&, const Params& p) {
  const auto& alpha = p.raw("alpha");
  if (!alpha.is_array() || alpha.empty()) invalid("expsum: \"alpha\" must be a nonempty array");
  const ExponentSet e = (p.has("E") || p.has("exponent_set") || p.has("k"))
                            ? p.exponents_or_full()
                            : ExponentSet::full(static_cast<int>(alpha.size()));
  if (alpha.size() != e.size()) invalid("expsum: one alpha per exponent required");
  const std::int64_t X = p.integer("X");
  bool exact = true;
  for (const auto& a : alpha) exact = exact && a.is_string();
  Complex f;
  if (exact) {
    std::vector<Rational> q;
    for (const auto& a : alpha) q.push_back(parse_rational(a.get<std::string>()));
    f = weyl_sum(q, X, e);
  } else {
    std::vector<double> d;
    for (const auto& a : alpha) {
      if (a.is_number()) d.push_back(a.get<double>());
      else if (a.is_string()) d.push_back(static_cast<double>(parse_rational(a.get<std::string>())));
      else invalid("expsum: alpha entries must be numbers or strings");
    }
    f = weyl_sum(d, X, e);
  }
  return {"csv", csv("Weyl sum f(alpha; X) = sum_{x<=X} e(sum_j alpha_j x^j)", "re,im,modulus",
                     {real(f.real()) + "," + real(f.imag()) + "," + real(std::abs(f))}),
          {}};
}

RunResult run_congruence(const ExperimentConfig&, const Params& p) {
  const std::int64_t prime = p.integer("p");
  const int k = p.small("k"), a = p.small("a", 0), b = p.small("b", 1);
  const std::string check = p.text("check", "both");
  if (check != "bset" && check != "distinct" && check != "both" && check != "histogram")
    invalid("congruence: check must be bset, distinct, both or histogram");
  RunResult r{"csv", "", {}};
  if (check == "histogram") {
    // Per-target cardinalities at a maximizing (sigma, xi, eta).
    const auto m = bset_max(prime, k, a, b);
    const PrimeParams params{prime, k, a, b, m.xi, m.eta, m.sigma};
    std::vector<std::string> rows;
    for (const auto& [target, n] : bset_histogram(params))
      rows.push_back(join(target, " ") + "," + std::to_string(n));
    std::string sigma;
    for (int v : m.sigma) sigma += v > 0 ? "+" : "-";
    r.text = csv("solution counts per target m, p=" + std::to_string(prime) + " k=" + std::to_string(k) + " a=" +
                     std::to_string(a) + " b=" + std::to_string(b) + " sigma=" + sigma + " xi=" + std::to_string(m.xi) +
                     " eta=" + std::to_string(m.eta),
                 "target,count", rows);
    return r;
  }
  std::vector<std::string> rows;
  auto row = [&](const char* kind, const CongruenceMax& m) {
    rows.push_back(std::string(kind) + "," + std::to_string(prime) + "," + std::to_string(k) + "," + std::to_string(a) +
                   "," + std::to_string(b) + "," + m.max_card.str() + "," + m.bound.str() + "," + (m.pass ? "1" : "0"));
    if (!m.pass) r.failures.push_back(std::string(kind) + " bound violated");
  };
  if (check != "distinct") row("bset", bset_max(prime, k, a, b));
  if (check != "bset") row("distinct", distinct_residue_max(prime, k, a, b));
  r.text = csv("largest solution set of the power-sum congruences against its bound", "kind,p,k,a,b,max_card,bound,pass", rows);
  return r;
}

RunResult run_singular(const ExperimentConfig&, const Params& p) {
  const int s = p.small("s"), k = p.small("k");
  const std::int64_t Q = p.integer("Q", 50);
  const auto series = singular_series(s, k, Q);
  std::string header = "s,k,Q,series";
  std::string row = std::to_string(s) + "," + std::to_string(k) + "," + std::to_string(Q) + "," + real(series.value);
  if (p.has("box")) {
    const auto integral = singular_integral(s, k, p.number("box", 50), p.integer("grid", 0));
    header += ",box,grid,integral,tail,product";
    row += "," + real(integral.box) + "," + std::to_string(integral.grid) + "," + real(integral.value) + "," +
           real(integral.tail) + "," + real(series.value * integral.value);
  }
  return {"csv", csv("truncated singular series (and singular integral) of the mean value", header, {row}), {}};
}

RunResult run_waring(const ExperimentConfig&, const Params& p) {
  const int s = p.small("s"), k = p.small("k");
  const std::int64_t Q = p.integer("Q", 30);
  const auto ns = p.integers("n");
  const auto counts = waring_counts(s, k, ns);
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double main = waring_main_term(s, k, ns[i], Q);
    rows.push_back(std::to_string(ns[i]) + "," + counts[i].str() + "," + real(main) + "," +
                   real(static_cast<double>(counts[i]) / main));
  }
  return {"csv",
          csv("representations as sums of s k-th powers against the heuristic main term, s=" + std::to_string(s) +
                  " k=" + std::to_string(k) + " Q=" + std::to_string(Q),
              "n,count,main_term,ratio", rows),
          {}};
}

json witness_json(const MultigradeWitness& w) {
  json j;
  j["k"] = w.k;
  j["s"] = w.s;
  j["h"] = w.h;
  j["tuples"] = w.tuples;
  j["common_power_sums"] = json::array();
  for (const auto& c : w.common_power_sums.components) j["common_power_sums"].push_back(bigint_to_json(c));
  j["top_sums"] = json::array();
  for (const auto& c : w.top_sums) j["top_sums"].push_back(bigint_to_json(c));
  return j;
}

RunResult run_tarry(const ExperimentConfig& c, const Params& p) {
  const std::string mode = p.text("mode", "search");
  json out;
  RunResult r{"json", "", {}};
  if (mode == "search") {
    const auto w = multigrade_search(p.small("k"), p.small("h"), p.small("s"), p.integer("X"), c.engine());
    out["found"] = w.has_value();
    if (w) out["witness"] = witness_json(*w);
  } else if (mode == "criterion") {
    const int k = p.small("k"), t = p.small("t"), s = p.small("s");
    const auto crit = tarry_criterion(k, t, s, p.integer("X"), c.engine());
    out["J_k"] = crit.J_k.str();
    out["J_k1"] = crit.J_k1.str();
    out["holds"] = crit.holds;
    if (crit.witness) out["witness"] = witness_json(*crit.witness);
    if (p.has("X_max")) {
      const auto first = smallest_criterion_X(k, t, s, p.integer("X_max"), c.engine());
      out["smallest_X"] = first ? json(*first) : json(nullptr);
    }
  } else {
    invalid("tarry: mode must be search or criterion");
  }
  r.text = out.dump(2) + "\n";
  return r;
}

RunResult run_bounds(const ExperimentConfig&, const Params& p) {
  const std::string mode = p.text("mode", "table");
  if (mode == "table") {
    const auto t = theorem_table(p.small("k"));
    json j{{"k", t.k},         {"V_bound", t.V_bound},     {"W_bound", t.W_bound},         {"G_tilde", t.G_tilde},
           {"sigma_inv", t.sigma_inv}, {"sigma_inv_log", t.sigma_inv_log}, {"tau_inv", t.tau_inv},
           {"C_k", t.C_k},     {"S_k", t.S_k}};
    return {"json", j.dump(2) + "\n", {}};
  }
  if (mode == "exponent") {
    const auto b = permissible_exponent(p.small("s"), p.small("k"));
    std::ostringstream lam, eta;
    lam << b.lambda;
    eta << b.eta;
    json j{{"s", b.s},
           {"k", b.k},
           {"lambda", lam.str()},
           {"lambda_decimal", to_decimal(b.lambda)},
           {"eta", eta.str()},
           {"eta_decimal", to_decimal(b.eta)},
           {"source", to_string(b.source)}};
    return {"json", j.dump(2) + "\n", {}};
  }
  if (mode == "gtilde-table") {
    RunResult r{"csv", "", {}};
    std::vector<std::string> rows;
    for (const auto& row : gtilde_comparison()) {
      const bool better = row.current < row.prior;
      rows.push_back(std::to_string(row.k) + "," + std::to_string(row.current) + "," + std::to_string(row.prior) + "," +
                     (better ? "1" : "0"));
      if (!better) r.failures.push_back("k=" + std::to_string(row.k) + ": new bound not below prior");
    }
    r.text = csv("variables for the Waring asymptotic, 2k^2+2k-3 against previously recorded bounds",
                 "k,current,prior,improved", rows);
    return r;
  }
  invalid("bounds: mode must be table, exponent or gtilde-table");
}

RunResult run_verify(const ExperimentConfig& c, const Params& p) {
  const std::string level = p.text("level", "quick");
  if (level != "quick" && level != "full") invalid("verify: level must be quick or full");
  std::string dir = p.text("output_dir", "");
  const auto report = verify_suite(level == "full" ? VerifyLevel::kFull : VerifyLevel::kQuick, c.engine(), dir);
  RunResult r{"csv", report.to_csv(), {}};
  for (const auto& e : report.entries)
    if (!e.pass) r.failures.push_back(e.name + ": " + e.detail);
  return r;
}

}  // namespace

// --- configuration ----------------------------------------------------------

std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommandNames)
    if (cmd == c) return name;
  return "unknown";
}

std::optional<Command> command_from_string(const std::string& name) {
  for (const auto& [cmd, n] : kCommandNames)
    if (name == n) return cmd;
  return std::nullopt;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) invalid("config must be a JSON object");
  ExperimentConfig c;
  if (!j.contains("command") || !j.at("command").is_string()) invalid("config needs a string \"command\"");
  const auto cmd = command_from_string(j.at("command").get<std::string>());
  if (!cmd) invalid("unknown command \"" + j.at("command").get<std::string>() + "\"");
  c.command = *cmd;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    if (key == "name") {
      if (!value.is_string()) invalid("\"name\" must be a string");
      c.name = value.get<std::string>();
    } else if (key == "output_path") {
      if (!value.is_string()) invalid("\"output_path\" must be a string");
      c.output_path = value.get<std::string>();
    } else if (key == "threads") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 1 || value.get<std::int64_t>() > 1024)
        invalid("\"threads\" must be an integer in [1, 1024]");
      c.threads = value.get<unsigned>();
    } else if (key == "budget_bytes") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 1) invalid("\"budget_bytes\" must be a positive integer");
      c.budget_bytes = value.get<std::uint64_t>();
    } else if (key == "parameters") {
      if (!value.is_object()) invalid("\"parameters\" must be an object");
      for (const auto& [k, v] : value.items()) c.parameters[k] = v;
    } else {
      c.parameters[key] = value;
    }
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config \"" + path + "\"");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j = parameters;
  j["name"] = name;
  j["command"] = to_string(command);
  if (!output_path.empty()) j["output_path"] = output_path;
  j["threads"] = threads;
  j["budget_bytes"] = budget_bytes;
  return j;
}

void ExperimentConfig::validate() const {
  if (threads < 1) invalid("threads must be at least 1");
  const Params p(parameters, command);
  auto need = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) p.raw(k);
  };
  auto need_exponents = [&] {
    if (!p.has("E") && !p.has("exponent_set") && !p.has("k")) invalid(to_string(command) + ": need \"E\" or \"k\"");
  };
  switch (command) {
    case Command::kCount:
      if (!p.has("spec")) {
        need_exponents();
        need({"s"});
        if (!p.has("X") && !p.has("length")) invalid("count: need \"X\" or \"length\"");
      }
      break;
    case Command::kMoment: need({"k", "s", "X"}); break;
    case Command::kDftCheck:
      need_exponents();
      need({"s", "X"});
      break;
    case Command::kExpsum: need({"alpha", "X"}); break;
    case Command::kCongruence: need({"p", "k"}); break;
    case Command::kSingular: need({"s", "k"}); break;
    case Command::kWaring: need({"s", "k", "n"}); break;
    case Command::kTarry: {
      const auto mode = p.text("mode", "search");
      if (mode == "search") need({"k", "h", "s", "X"});
      else if (mode == "criterion") need({"k", "t", "s", "X"});
      else invalid("tarry: mode must be search or criterion");
      break;
    }
    case Command::kBounds: {
      const auto mode = p.text("mode", "table");
      if (mode == "table") need({"k"});
      else if (mode == "exponent") need({"s", "k"});
      else if (mode != "gtilde-table") invalid("bounds: mode must be table, exponent or gtilde-table");
      break;
    }
    case Command::kVerify: break;
  }
}

EngineOptions ExperimentConfig::engine() const {
  EngineOptions o;
  o.threads = threads;
  o.budget_bytes = budget_bytes;
  return o;
}

RunResult run_config(const ExperimentConfig& config) {
  config.validate();
  const Params p(config.parameters, config.command);
  try {
    switch (config.command) {
      case Command::kCount: return run_count(config, p);
      case Command::kMoment: return run_moment(config, p);
      case Command::kDftCheck: return run_dft_check(config, p);
      case Command::kExpsum: return run_expsum(config, p);
      case Command::kCongruence: return run_congruence(config, p);
      case Command::kSingular: return run_singular(config, p);
      case Command::kWaring: return run_waring(config, p);
      case Command::kTarry: return run_tarry(config, p);
      case Command::kBounds: return run_bounds(config, p);
      case Command::kVerify: return run_verify(config, p);
    }
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded(to_string(config.command) + " " + p.dump() + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigInvalid(to_string(config.command) + ": " + e.what());
  }
  invalid("unhandled command");
}

RunResult run_and_write(const ExperimentConfig& config) {
  RunResult r = run_config(config);
  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path);
    if (!out) throw Error("cannot write \"" + config.output_path + "\"");
    out << r.text;
  }
  return r;
}

// --- sweeps -----------------------------------------------------------------

double log_log_slope(const std::vector<double>& x, const std::vector<Count>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs at least two points");
  std::vector<long double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) throw InvalidArgument("slope needs positive data");
    lx.push_back(std::log(static_cast<long double>(x[i])));
    // log of a big integer: scale into long double range by its bit length.
    const auto bits = boost::multiprecision::msb(y[i]);
    const unsigned shift = bits > 60 ? static_cast<unsigned>(bits - 60) : 0;
    const Count top = y[i] >> shift;
    ly.push_back(std::log(static_cast<long double>(static_cast<std::uint64_t>(top))) +
                 static_cast<long double>(shift) * std::log(2.0L));
  }
  const auto n = static_cast<long double>(lx.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0) throw InvalidArgument("slope needs two distinct x values");
  return static_cast<double>(sxy / sxx);
}

RunResult sweep(const ExperimentConfig& base, const std::string& variable, const std::vector<json>& values) {
  if (values.empty()) invalid("sweep needs at least one value");
  RunResult out{"csv", "", {}};
  std::string comment, header, body;
  std::vector<double> xs;
  std::vector<Count> js;
  const bool fit = variable == "X" && (base.command == Command::kMoment || base.command == Command::kCount);
  for (const auto& v : values) {
    ExperimentConfig c = base;
    c.parameters[variable] = v;
    try {
      const RunResult r = run_config(c);
      if (r.format != "csv") invalid("sweep needs a command with CSV output");
      std::istringstream in(r.text);
      std::string line;
      bool seen_header = false;
      while (std::getline(in, line)) {
        if (line.rfind("# slope", 0) == 0) continue;
        if (line.rfind("#", 0) == 0) {
          if (comment.empty()) comment = line;
          continue;
        }
        if (!seen_header) {
          seen_header = true;
          if (header.empty()) header = line;
          continue;
        }
        body += line + "\n";
        if (fit) {
          // X is column 0 (moment) or 4 (count); J is column 1 or 5.
          std::vector<std::string> cells;
          std::stringstream ls(line);
          std::string cell;
          while (std::getline(ls, cell, ',')) cells.push_back(cell);
          const std::size_t xi = base.command == Command::kMoment ? 0 : 4;
          xs.push_back(std::stod(cells[xi]));
          js.emplace_back(cells[xi + 1]);
        }
      }
      for (const auto& f : r.failures) out.failures.push_back(variable + "=" + v.dump() + ": " + f);
    } catch (const ConfigInvalid&) {
      throw;
    } catch (const Error& e) {
      body += "# error," + variable + "=" + v.dump() + "," + e.what() + "\n";
      out.failures.push_back(variable + "=" + v.dump() + ": " + e.what());
    }
  }
  out.text = (comment.empty() ? "# sweep of " + variable : comment) + "\n" + header + "\n" + body;
  if (fit && xs.size() >= 2) out.text += "# slope," + real(log_log_slope(xs, js)) + "\n";
  return out;
}

// --- verification suite -----------------------------------------------------

bool VerifyReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

std::string VerifyReport::to_csv() const {
  std::string out = "# verification suite: one row per invariant\nname,pass,detail,seconds\n";
  for (const auto& e : entries) {
    std::string detail = e.detail;
    for (auto& ch : detail)
      if (ch == ',' || ch == '\n') ch = ';';
    out += e.name + "," + (e.pass ? "1" : "0") + "," + detail + "," + real(e.seconds) + "\n";
  }
  return out;
}

namespace {

/// Random small system: at most 3 blocks, degree <= 3, intervals of length
/// <= 8, with signs, residues, distinctness, coefficients and targets.
SystemSpec random_small_spec(std::mt19937_64& rng, long double max_tuples) {
  auto integer = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  while (true) {
    SystemSpec spec;
    std::vector<int> e;
    for (int j = 1; j <= 3; ++j)
      if (integer(0, 1)) e.push_back(j);
    if (e.empty()) e.push_back(static_cast<int>(integer(1, 3)));
    spec.exponents = ExponentSet(e);
    long double tuples = 1;
    for (std::int64_t b = integer(1, 3); b > 0; --b) {
      VariableBlock blk;
      blk.count = static_cast<int>(integer(1, 3));
      blk.interval = {integer(-4, 6), integer(1, 8)};
      blk.sign = integer(0, 1) ? 1 : -1;
      if (integer(0, 3) == 0) {
        const auto m = integer(2, 3);
        blk.residue = ResidueClass{m, integer(0, m - 1)};
      }
      if (integer(0, 3) == 0) blk.distinct_mod = integer(1, 4);
      if (integer(0, 4) == 0) {
        std::vector<std::int64_t> c;
        for (std::size_t i = 0; i < e.size(); ++i) c.push_back(integer(-2, 2) == 0 ? 1 : integer(-2, 2));
        blk.coefficients = c;
      }
      for (int i = 0; i < blk.count; ++i) tuples *= static_cast<long double>(blk.interval.length);
      spec.blocks.push_back(blk);
    }
    if (tuples > max_tuples) continue;
    if (integer(0, 1)) {
      PowerSumVector t;
      for (std::size_t i = 0; i < e.size(); ++i) t.components.emplace_back(integer(-3, 3));
      spec.target = t;
    }
    return spec;
  }
}

class Suite {
 public:
  explicit Suite(VerifyReport& report) : report_(report) {}

  void check(const std::string& name, const std::function<std::string(bool&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    VerifyEntry e;
    e.name = name;
    try {
      bool pass = true;
      e.detail = body(pass);
      e.pass = pass;
    } catch (const std::exception& ex) {
      e.pass = false;
      e.detail = std::string("error: ") + ex.what();
    }
    e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report_.entries.push_back(std::move(e));
  }

 private:
  VerifyReport& report_;
};

}  // namespace

VerifyReport verify_suite(VerifyLevel level, const EngineOptions& options, const std::string& output_dir) {
  VerifyReport report;
  Suite suite(report);

  suite.check("mean value E={1;2} s=2 X=5", [&](bool& ok) {
    const Count J = mean_value(ExponentSet({1, 2}), 2, {1, 5}, options);
    ok = J == 45;
    return "J=" + J.str();
  });
  suite.check("constrained count equals brute force on 200 random systems", [&](bool& ok) {
    std::mt19937_64 rng(20240611);
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
      const SystemSpec spec = random_small_spec(rng, 2e5L);
      if (constrained_count(spec, options) != brute_force_count(spec)) ++bad;
    }
    ok = bad == 0;
    return std::to_string(bad) + " mismatches";
  });
  suite.check("finite orthogonality equals convolution", [&](bool& ok) {
    int bad = 0, n = 0;
    auto cmp = [&](const ExponentSet& e, int s, std::int64_t X) {
      ++n;
      if (dft_mean_value(e, s, X) != mean_value(e, s, {1, X}, options)) ++bad;
    };
    for (std::int64_t X = 1; X <= 4; ++X) cmp(ExponentSet({1, 2}), 2, X);
    for (int s = 1; s <= 2; ++s)
      for (std::int64_t X = 1; X <= 6; ++X) cmp(ExponentSet({1}), s, X);
    for (std::int64_t X = 1; X <= 3; ++X) cmp(ExponentSet({1, 2, 3}), 1, X);
    ok = bad == 0;
    return std::to_string(n - bad) + "/" + std::to_string(n) + " equal";
  });
  suite.check("translation invariance of J", [&](bool& ok) {
    const Count base = mean_value(ExponentSet::full(3), 3, {1, 7}, options);
    for (std::int64_t a : {-20, -3, 0, 5, 100}) ok = ok && mean_value(ExponentSet::full(3), 3, {a, 7}, options) == base;
    return "J=" + base.str();
  });
  for (auto [p, k] : {std::pair<std::int64_t, int>{5, 2}, {7, 2}}) {
    suite.check("congruence bound (k=" + std::to_string(k) + " p=" + std::to_string(p) + ")", [&, p = p, k = k](bool& ok) {
      const auto m = bset_max(p, k, 0, 1);
      ok = m.pass;
      return "max " + m.max_card.str() + " bound " + m.bound.str();
    });
  }
  suite.check("distinct residues at most k! (k=2 p=5)", [&](bool& ok) {
    const auto m = distinct_residue_max(5, 2, 0, 1);
    ok = m.pass;
    return "max " + m.max_card.str() + " bound " + m.bound.str();
  });
  suite.check("unique lifting (k=2 p=5)", [&](bool& ok) {
    ok = lift_count_check(5, 2, {1, 2}) && lift_count_check(5, 2, {3, 5}, 2);
    return std::string(ok ? "one-to-one" : "not one-to-one");
  });
  suite.check("multigrade class {1;5;6}/{2;3;7}", [&](bool& ok) {
    const auto groups = multigrade_groups(2, 2, 3, 7, options);
    ok = false;
    for (const auto& g : groups)
      if (g.common_power_sums.components == std::vector<BigInt>{12, 62}) {
        const auto& t = g.top_sums;
        ok = std::find(t.begin(), t.end(), BigInt(342)) != t.end() && std::find(t.begin(), t.end(), BigInt(378)) != t.end();
      }
    ok = ok && !multigrade_search(2, 2, 2, 20, options);
    return std::to_string(groups.size()) + " classes";
  });
  suite.check("counting criterion (k=1 t=2 s=2)", [&](bool& ok) {
    const auto c = tarry_criterion(1, 2, 2, 4, options);
    const auto first = smallest_criterion_X(1, 2, 2, 20, options);
    ok = c.J_k == 44 && c.J_k1 == 28 && !c.holds && first == 6;
    return "J " + c.J_k.str() + "/" + c.J_k1.str() + " first X " + (first ? std::to_string(*first) : "none");
  });
  suite.check("Waring variable counts 2k^2+2k-3 below prior bounds", [&](bool& ok) {
    for (const auto& r : gtilde_comparison()) ok = ok && r.current < r.prior && r.current == 2 * r.k * r.k + 2 * r.k - 3;
    ok = ok && theorem_table(7).G_tilde == 109 && theorem_table(8).G_tilde == 141 && theorem_table(9).G_tilde == 177 &&
         theorem_table(20).G_tilde == 837;
    return std::string("k=7..20");
  });
  suite.check("permissible exponents", [&](bool& ok) {
    ok = permissible_exponent(12, 3).lambda == 18 && permissible_exponent(10, 4).eta == Rational(10, 3) &&
         permissible_exponent(1, 2).lambda == 2;
    for (int k = 3; k <= 10; ++k) ok = ok && permissible_exponent(k * k + k - 2, k).eta <= 1;
    ok = ok && classical_eta(2, 2).eta == 1 && classical_eta(4, 2).eta == Rational(1, 2);
    return std::string("anchors and thresholds");
  });
  suite.check("singular series first terms", [&](bool& ok) {
    const double one = singular_series(7, 2, 1).value;
    const double lin = singular_series(1, 1, 10).value;
    ok = one == 1.0 && std::fabs(lin - 1.0) < 1e-12;
    return real(one) + " " + real(lin);
  });
  suite.check("Waring counts", [&](bool& ok) {
    ok = waring_count(1, 3, 8) == 1 && waring_count(1, 3, 9) == 0 && waring_count(2, 2, 5) == 2 &&
         waring_count(4, 2, 4) == 1;
    return std::string("R(8), R(9), R(5), R(4)");
  });
  suite.check("asymptotic ratio", [&](bool& ok) {
    ok = asymptotic_ratio(1, 1, 17, options) == 1.0 && asymptotic_ratio(2, 2, 5, options) == 9.0;
    return std::string("1 and 9");
  });
  suite.check("determinism across thread counts", [&](bool& ok) {
    EngineOptions one = options, many = options;
    one.threads = 1;
    many.threads = 4;
    ok = mean_value(ExponentSet::full(2), 3, {1, 40}, one) == mean_value(ExponentSet::full(2), 3, {1, 40}, many);
    return std::string("threads 1 and 4");
  });

  if (level == VerifyLevel::kFull) {
    suite.check("J_{7,2} exponent fit X=64..512", [&](bool& ok) {
      std::vector<double> xs;
      std::vector<Count> js;
      std::string rows;
      for (std::int64_t X : {64, 128, 256, 512}) {
        const Count J = vinogradov_mean_value(2, 7, X, options);
        if (!js.empty()) ok = ok && J > js.back();
        xs.push_back(static_cast<double>(X));
        js.push_back(J);
        rows += std::to_string(X) + "," + J.str() + "," + real(asymptotic_ratio(2, 7, X, J)) + "\n";
      }
      const double slope = log_log_slope(xs, js);
      ok = ok && std::fabs(slope - 11) <= 0.2;
      if (!output_dir.empty()) {
        std::ofstream out(output_dir + "/sweep_j72.csv");
        out << "# J_{s,k}(X) on [1, X] and J / X^(2s - k(k+1)/2), s=7 k=2\nX,J,ratio\n" << rows << "# slope," << real(slope)
            << "\n";
      }
      return "slope " + real(slope);
    });
    suite.check("Waring (s=21 k=3) n=10^6 main-term ratio", [&](bool& ok) {
      const double ratio = static_cast<double>(waring_count(21, 3, 1000000)) / waring_main_term(21, 3, 1000000, 30);
      ok = ratio >= 0.75 && ratio <= 1.25;
      return "ratio " + real(ratio);
    });
    suite.check("congruence bound (k=3 p=5)", [&](bool& ok) {
      const auto m = bset_max(5, 3, 0, 1);
      const auto d = distinct_residue_max(5, 3, 0, 1);
      ok = m.pass && d.pass;
      return "max " + m.max_card.str() + " bound " + m.bound.str() + "; distinct " + d.max_card.str();
    });
  }
  return report;
}

}  // namespace vinolab
