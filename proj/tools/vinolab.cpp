// Command-line front end. Every subcommand builds an ExperimentConfig and
// runs it, so flags and JSON configs share one code path.
// Exit status: 0 ok, 1 failed assertion or runtime error, 2 bad input.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "vinolab/experiments.hpp"
#include "vinolab/io.hpp"

using nlohmann::json;
using vinolab::Command;
using vinolab::ConfigInvalid;
using vinolab::ExperimentConfig;

namespace {

enum class Kind { kInt, kIntList, kReal, kText, kTextList };

/// Flags of one subcommand, collected into a parameter object.
class Flags {
 public:
  Flags(CLI::App* app, Command command) : app_(app), command_(command) {}

  Flags& add(const std::string& key, Kind kind, const std::string& help, bool required = false) {
    auto& slot = slots_[key];
    slot.kind = kind;
    CLI::Option* opt = nullptr;
    if (kind == Kind::kIntList || kind == Kind::kTextList)
      opt = app_->add_option("--" + key, slot.many, help)->delimiter(',');
    else
      opt = app_->add_option("--" + key, slot.one, help);
    if (required) opt->required();
    slot.option = opt;
    return *this;
  }

  /// Parameters fixed by the subcommand itself, e.g. a mode.
  Flags& fixed(const std::string& key, json value) {
    fixed_[key] = std::move(value);
    return *this;
  }

  Command command() const { return command_; }
  CLI::App* app() const { return app_; }

  json parameters() const {
    json p = fixed_;
    for (const auto& [key, slot] : slots_) {
      if (slot.option->count() == 0) continue;
      switch (slot.kind) {
        case Kind::kInt: p[key] = integer(key, slot.one); break;
        case Kind::kReal: p[key] = real(key, slot.one); break;
        case Kind::kText: p[key] = slot.one; break;
        case Kind::kIntList: {
          json a = json::array();
          for (const auto& v : slot.many) a.push_back(integer(key, v));
          p[key] = a.size() == 1 && key != "E" && key != "alpha" ? a[0] : a;
          break;
        }
        case Kind::kTextList: p[key] = slot.many; break;
      }
    }
    return p;
  }

 private:
  static std::int64_t integer(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    try {
      const auto x = std::stoll(v, &used);
      if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigInvalid("--" + key + ": \"" + v + "\" is not an integer");
  }
  static double real(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    try {
      const auto x = std::stod(v, &used);
      if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigInvalid("--" + key + ": \"" + v + "\" is not a number");
  }

  struct Slot {
    Kind kind = Kind::kInt;
    std::string one;
    std::vector<std::string> many;
    CLI::Option* option = nullptr;
  };
  CLI::App* app_;
  Command command_;
  std::map<std::string, Slot> slots_;
  json fixed_ = json::object();
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot read \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid("\"" + path + "\" is not valid JSON: " + e.what());
  }
}

/// Sweep values: JSON literals where they parse, strings otherwise.
std::vector<json> sweep_values(const std::vector<std::string>& raw) {
  std::vector<json> out;
  for (const auto& v : raw) {
    try {
      out.push_back(json::parse(v));
    } catch (const json::parse_error&) {
      out.push_back(v);
    }
  }
  return out;
}

int emit(const vinolab::RunResult& r, const std::string& output_path) {
  std::cout << r.text;
  if (!output_path.empty()) {
    std::ofstream out(output_path);
    if (!out) throw vinolab::Error("cannot write \"" + output_path + "\"");
    out << r.text;
  }
  for (const auto& f : r.failures) std::cerr << "FAIL: " << f << "\n";
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solution counts for power-sum systems, circle-method constants and exponent bounds"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  unsigned threads = 1;
  std::uint64_t budget = std::uint64_t{4} << 30;
  std::string output, name = "cli";
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--budget-bytes", budget, "largest predicted table size")->check(CLI::PositiveNumber);
  app.add_option("-o,--output", output, "also write the output to this file");
  app.add_option("--name", name, "spec_id column of count rows");
  app.fallthrough();

  std::vector<std::unique_ptr<Flags>> commands;
  auto command = [&](CLI::App* sub, Command c) -> Flags& {
    commands.push_back(std::make_unique<Flags>(sub, c));
    return *commands.back();
  };

  auto* count = app.add_subcommand("count", "J for an exponent set, or the count of a JSON system spec");
  command(count, Command::kCount)
      .add("E", Kind::kIntList, "exponent set, e.g. 1,2")
      .add("k", Kind::kInt, "degree; exponent set {1..k} when --E is absent")
      .add("s", Kind::kInt, "variables per side")
      .add("X", Kind::kIntList, "interval lengths")
      .add("start", Kind::kInt, "interval start (default 1)");
  std::string spec_file;
  count->add_option("--spec", spec_file, "JSON system spec file")->check(CLI::ExistingFile);

  command(app.add_subcommand("moment", "J_{s,k}(X) on [1, X] with ratio to X^(2s - k(k+1)/2)"), Command::kMoment)
      .add("k", Kind::kInt, "degree", true)
      .add("s", Kind::kInt, "variables per side", true)
      .add("X", Kind::kIntList, "lengths; two or more add a slope footer", true);

  command(app.add_subcommand("dft-check", "mean value by finite orthogonality against the engine"), Command::kDftCheck)
      .add("E", Kind::kIntList, "exponent set")
      .add("k", Kind::kInt, "degree when --E is absent")
      .add("s", Kind::kInt, "variables per side", true)
      .add("X", Kind::kIntList, "lengths", true);

  command(app.add_subcommand("expsum", "Weyl sum f(alpha; X)"), Command::kExpsum)
      .add("alpha", Kind::kTextList, "coefficients as p/q or decimals", true)
      .add("X", Kind::kInt, "length", true)
      .add("E", Kind::kIntList, "exponent set (default 1..len(alpha))")
      .add("k", Kind::kInt, "degree when --E is absent");

  auto* congruence = app.add_subcommand("congruence", "exhaustive congruence checks");
  congruence->require_subcommand(1);
  for (const auto& [mode, help] : {std::pair<const char*, const char*>{"bound", "largest solution set against its bound"},
                                   {"histogram", "solution count per target at a maximizing choice"}}) {
    auto& f = command(congruence->add_subcommand(mode, help), Command::kCongruence)
                  .add("p", Kind::kInt, "prime", true)
                  .add("k", Kind::kInt, "degree", true)
                  .add("a", Kind::kInt, "a (default 0)")
                  .add("b", Kind::kInt, "b (default 1)");
    if (std::string(mode) == "bound") f.add("check", Kind::kText, "bset, distinct or both (default)");
    else f.fixed("check", "histogram");
  }

  command(app.add_subcommand("singular", "truncated singular series, optionally the singular integral"), Command::kSingular)
      .add("s", Kind::kInt, "variables per side", true)
      .add("k", Kind::kInt, "degree", true)
      .add("Q", Kind::kInt, "series truncation (default 50)")
      .add("box", Kind::kReal, "integral box half-width; enables the integral")
      .add("grid", Kind::kInt, "points per unit length (default s + 1)");

  command(app.add_subcommand("waring", "R_{s,k}(n) against the heuristic main term"), Command::kWaring)
      .add("s", Kind::kInt, "number of powers", true)
      .add("k", Kind::kInt, "degree", true)
      .add("n", Kind::kIntList, "targets", true)
      .add("Q", Kind::kInt, "series truncation (default 30)");

  auto* tarry = app.add_subcommand("tarry", "multigrade witnesses");
  tarry->require_subcommand(1);
  command(tarry->add_subcommand("search", "h tuples with equal power sums to degree k, distinct at k+1"), Command::kTarry)
      .fixed("mode", "search")
      .add("k", Kind::kInt, "degree", true)
      .add("h", Kind::kInt, "number of tuples", true)
      .add("s", Kind::kInt, "tuple length", true)
      .add("X", Kind::kInt, "entries in [1, X]", true);
  command(tarry->add_subcommand("criterion", "J_{s,k}(X) > t J_{s,k+1}(X) with witness extraction"), Command::kTarry)
      .fixed("mode", "criterion")
      .add("k", Kind::kInt, "degree", true)
      .add("t", Kind::kInt, "multiplier", true)
      .add("s", Kind::kInt, "tuple length", true)
      .add("X", Kind::kInt, "entries in [1, X]", true)
      .add("X-max", Kind::kInt, "also report the smallest X up to this value");

  auto* bounds = app.add_subcommand("bounds", "exponent and variable-count bounds");
  command(bounds, Command::kBounds).fixed("mode", "table").add("k", Kind::kInt, "degree");
  command(bounds->add_subcommand("exponent", "permissible exponent lambda, eta and source"), Command::kBounds)
      .fixed("mode", "exponent")
      .add("s", Kind::kInt, "variables per side", true)
      .add("k", Kind::kInt, "degree", true);
  command(bounds->add_subcommand("gtilde-table", "variable counts for k = 7..20 against prior bounds"), Command::kBounds)
      .fixed("mode", "gtilde-table");

  auto& verify = command(app.add_subcommand("verify", "run the invariant suite"), Command::kVerify);
  verify.add("level", Kind::kText, "quick (default) or full").add("output-dir", Kind::kText, "where full writes sweep_j72.csv");

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a JSON experiment config");
  run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);

  std::string sweep_config, variable;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "run a config once per value of one parameter");
  sweep->add_option("config", sweep_config, "config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--var", variable, "parameter to vary")->required();
  sweep->add_option("--values", values, "values, comma separated")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto finish = [&](ExperimentConfig c) {
      if (app.get_option("--threads")->count()) c.threads = threads;
      if (app.get_option("--budget-bytes")->count()) c.budget_bytes = budget;
      if (!output.empty()) c.output_path = output;
      return c;
    };
    if (run->parsed()) {
      const auto c = finish(ExperimentConfig::from_file(config_path));
      return emit(vinolab::run_config(c), c.output_path);
    }
    if (sweep->parsed()) {
      const auto c = finish(ExperimentConfig::from_file(sweep_config));
      return emit(vinolab::sweep(c, variable, sweep_values(values)), c.output_path);
    }
    // The deepest parsed subcommand that owns flags.
    const Flags* chosen = nullptr;
    for (const auto& f : commands)
      if (f->app()->parsed() && (!chosen || f->app()->get_parent() == chosen->app())) chosen = f.get();
    if (!chosen) throw ConfigInvalid("no command given");
    json j = chosen->parameters();
    if (chosen->command() == Command::kCount && !spec_file.empty()) j["spec"] = read_json_file(spec_file);
    if (j.contains("X-max")) {
      j["X_max"] = j["X-max"];
      j.erase("X-max");
    }
    if (j.contains("output-dir")) {
      j["output_dir"] = j["output-dir"];
      j.erase("output-dir");
    }
    j["command"] = vinolab::to_string(chosen->command());
    j["name"] = name;
    const auto c = finish(ExperimentConfig::from_json(j));
    return emit(vinolab::run_config(c), c.output_path);
  } catch (const ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const vinolab::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const vinolab::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const vinolab::TooLarge& e) {
    std::cerr << "too large: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
