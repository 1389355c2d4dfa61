#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vinolab/bounds.hpp"
#include "vinolab/circle.hpp"
#include "vinolab/congruence.hpp"
#include "vinolab/counting.hpp"
#include "vinolab/experiments.hpp"
#include "vinolab/expsum.hpp"
#include "vinolab/io.hpp"
#include "vinolab/tarry.hpp"

namespace py = pybind11;
using namespace vinolab;

namespace {

/// Exact: big integers cross the boundary as decimal text.
py::int_ to_py(const BigInt& v) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(v.str().c_str(), nullptr, 10));
}

py::object fraction(const Rational& r) {
  return py::module_::import("fractions")
      .attr("Fraction")(to_py(boost::multiprecision::numerator(r)), to_py(boost::multiprecision::denominator(r)));
}

EngineOptions engine(unsigned threads, std::uint64_t budget_bytes) {
  EngineOptions o;
  o.threads = threads;
  o.budget_bytes = budget_bytes;
  return o;
}

py::list to_py(const std::vector<BigInt>& v) {
  py::list out;
  for (const auto& x : v) out.append(to_py(x));
  return out;
}

py::dict witness_dict(const MultigradeWitness& w) {
  py::dict d;
  d["k"] = w.k;
  d["s"] = w.s;
  d["h"] = w.h;
  d["tuples"] = w.tuples;
  d["common_power_sums"] = to_py(w.common_power_sums.components);
  d["top_sums"] = to_py(w.top_sums);
  return d;
}

constexpr std::uint64_t kDefaultBudget = std::uint64_t{4} << 30;

}  // namespace

PYBIND11_MODULE(_vinolab, m) {
  m.doc() = "Exact solution counts for power-sum systems and related constants";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error.ptr());
  py::register_exception<TooLarge>(m, "TooLarge", error.ptr());
  py::register_exception<NoConvergence>(m, "NoConvergence", error.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<ConfigInvalid>(m, "ConfigInvalid", error.ptr());

  m.def(
      "mean_value",
      [](const std::vector<int>& E, int s, std::int64_t start, std::int64_t length, unsigned threads,
         std::uint64_t budget_bytes) {
        return to_py(mean_value(ExponentSet(E), s, {start, length}, engine(threads, budget_bytes)));
      },
      py::arg("E"), py::arg("s"), py::arg("start"), py::arg("length"), py::arg("threads") = 1,
      py::arg("budget_bytes") = kDefaultBudget, "Paired solutions with exponents E on [start, start+length).");
  m.def(
      "vinogradov_mean_value",
      [](int k, int s, std::int64_t X, unsigned threads, std::uint64_t budget_bytes) {
        return to_py(vinogradov_mean_value(k, s, X, engine(threads, budget_bytes)));
      },
      py::arg("k"), py::arg("s"), py::arg("X"), py::arg("threads") = 1, py::arg("budget_bytes") = kDefaultBudget);
  m.def(
      "constrained_count",
      [](const std::string& spec_json, unsigned threads, std::uint64_t budget_bytes) {
        return to_py(constrained_count(spec_from_json_text(spec_json), engine(threads, budget_bytes)));
      },
      py::arg("spec_json"), py::arg("threads") = 1, py::arg("budget_bytes") = kDefaultBudget);
  m.def(
      "brute_force_count", [](const std::string& spec_json) { return to_py(brute_force_count(spec_from_json_text(spec_json))); },
      py::arg("spec_json"));
  m.def(
      "dft_mean_value", [](const std::vector<int>& E, int s, std::int64_t X) { return to_py(dft_mean_value(ExponentSet(E), s, X)); },
      py::arg("E"), py::arg("s"), py::arg("X"));
  m.def(
      "weyl_sum",
      [](const std::vector<double>& alpha, std::int64_t X, const std::vector<int>& E) {
        return weyl_sum(alpha, X, ExponentSet(E));
      },
      py::arg("alpha"), py::arg("X"), py::arg("E"));

  m.def(
      "congruence_max",
      [](std::int64_t p, int k, int a, int b, bool distinct) {
        const auto r = distinct ? distinct_residue_max(p, k, a, b) : bset_max(p, k, a, b);
        py::dict d;
        d["max_card"] = to_py(r.max_card);
        d["bound"] = to_py(r.bound);
        d["pass"] = r.pass;
        return d;
      },
      py::arg("p"), py::arg("k"), py::arg("a") = 0, py::arg("b") = 1, py::arg("distinct") = false);

  m.def(
      "singular_series", [](int s, int k, std::int64_t Q) { return singular_series(s, k, Q).value; }, py::arg("s"),
      py::arg("k"), py::arg("Q") = 50);
  m.def(
      "singular_integral",
      [](int s, int k, double box, std::int64_t grid) {
        const auto r = singular_integral(s, k, box, grid);
        py::dict d;
        d["value"] = r.value;
        d["coarse_value"] = r.coarse_value;
        d["tail"] = r.tail;
        d["grid"] = r.grid;
        return d;
      },
      py::arg("s"), py::arg("k"), py::arg("box") = 50.0, py::arg("grid") = 0);
  m.def(
      "waring_count", [](int s, int k, std::int64_t n) { return to_py(waring_count(s, k, n)); }, py::arg("s"), py::arg("k"),
      py::arg("n"));
  m.def("waring_main_term", &waring_main_term, py::arg("s"), py::arg("k"), py::arg("n"), py::arg("Q") = 30);

  m.def(
      "multigrade_search",
      [](int k, int h, int s, std::int64_t X) -> py::object {
        const auto w = multigrade_search(k, h, s, X);
        if (!w) return py::none();
        return witness_dict(*w);
      },
      py::arg("k"), py::arg("h"), py::arg("s"), py::arg("X"));

  m.def(
      "theorem_table",
      [](int k) {
        const auto t = theorem_table(k);
        py::dict d;
        d["k"] = t.k;
        d["V_bound"] = t.V_bound;
        d["W_bound"] = t.W_bound;
        d["G_tilde"] = t.G_tilde;
        d["sigma_inv"] = t.sigma_inv;
        d["sigma_inv_log"] = t.sigma_inv_log;
        d["tau_inv"] = t.tau_inv;
        d["C_k"] = t.C_k;
        d["S_k"] = t.S_k;
        return d;
      },
      py::arg("k"));
  m.def(
      "permissible_exponent",
      [](int s, int k) {
        const auto b = permissible_exponent(s, k);
        py::dict d;
        d["lambda"] = fraction(b.lambda);
        d["eta"] = fraction(b.eta);
        d["source"] = to_string(b.source);
        return d;
      },
      py::arg("s"), py::arg("k"));

  m.def(
      "run_config",
      [](const std::string& config_json) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(config_json);
        } catch (const nlohmann::json::parse_error& e) {
          throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
        }
        const auto r = run_config(ExperimentConfig::from_json(j));
        return py::make_tuple(r.format, r.text, r.failures);
      },
      py::arg("config_json"), "Runs a JSON experiment config; returns (format, text, failures).");
  m.def(
      "verify",
      [](const std::string& level) {
        if (level != "quick" && level != "full") throw ConfigInvalid("level must be quick or full");
        const auto report = verify_suite(level == "full" ? VerifyLevel::kFull : VerifyLevel::kQuick);
        py::list out;
        for (const auto& e : report.entries) {
          py::dict d;
          d["name"] = e.name;
          d["pass"] = e.pass;
          d["detail"] = e.detail;
          d["seconds"] = e.seconds;
          out.append(d);
        }
        return out;
      },
      py::arg("level") = "quick");
}
