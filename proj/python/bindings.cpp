#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "maxrep/bounds.hpp"
#include "maxrep/corpus.hpp"
#include "maxrep/entropy.hpp"
#include "maxrep/errors.hpp"
#include "maxrep/model_io.hpp"
#include "maxrep/strstat.hpp"

namespace py = pybind11;
using namespace maxrep;

namespace {

Sequence to_sequence(const std::vector<Symbol>& symbols, std::optional<Symbol> alphabet) {
  Symbol a = 1;
  if (alphabet) {
    a = *alphabet;
  } else {
    for (Symbol s : symbols) a = std::max(a, s + 1);
  }
  return Sequence(symbols, a);
}

ProcessModel parse_model(const std::string& text) { return model_from_json(nlohmann::json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Maximal repetition, block entropies and repetition inequalities.";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);

  m.def("maximal_repetition",
        [](const std::vector<Symbol>& x) { return maximal_repetition(x); },
        py::arg("symbols"));
  m.def("subword_complexity",
        [](const std::vector<Symbol>& x, std::size_t k) { return subword_complexity(x, k); },
        py::arg("symbols"), py::arg("k"));
  m.def("longest_match",
        [](const std::vector<Symbol>& past, const std::vector<Symbol>& future) {
          return longest_match(past, future);
        },
        py::arg("past"), py::arg("future"));
  m.def("waiting_time",
        [](const std::vector<Symbol>& window, std::size_t anchor, const std::vector<Symbol>& w,
           std::optional<std::uint64_t> cap) {
          auto r = waiting_time(window, anchor, w, cap);
          return py::make_tuple(r.value, r.truncated);
        },
        py::arg("window"), py::arg("anchor"), py::arg("word"), py::arg("cap") = py::none(),
        "Returns (value, truncated).");
  m.def("maximal_repetition_profile",
        [](const std::vector<Symbol>& x, const std::vector<std::size_t>& grid) {
          std::vector<std::pair<std::size_t, std::size_t>> out;
          for (const auto& p : maximal_repetition_profile(to_sequence(x, std::nullopt), grid)) {
            out.emplace_back(p.n, p.repetition);
          }
          return out;
        },
        py::arg("symbols"), py::arg("grid"));

  m.def("sample",
        [](const std::string& model, std::size_t n, std::uint64_t seed) {
          auto x = sample(parse_model(model), n, seed);
          return std::vector<Symbol>(x.symbols().begin(), x.symbols().end());
        },
        py::arg("model_json"), py::arg("n"), py::arg("seed"));
  m.def("normalize_model",
        [](const std::string& model) { return model_to_json(parse_model(model)).dump(); },
        py::arg("model_json"), "Parses and validates a model, returning its canonical JSON.");
  m.def("block_log_prob",
        [](const std::string& model, const std::vector<Symbol>& w) {
          return block_log_prob(parse_model(model), w);
        },
        py::arg("model_json"), py::arg("word"));

  m.def("renyi_block_entropy",
        [](const std::string& model, std::size_t n, double gamma) {
          return renyi_block_entropy(parse_model(model), n, gamma).value;
        },
        py::arg("model_json"), py::arg("n"), py::arg("gamma"));
  m.def("conditional_renyi_entropy",
        [](const std::string& model, std::size_t n, double gamma, std::optional<std::size_t> context) {
          auto mode = context ? ContextMode::finite(*context) : ContextMode::infinite();
          return conditional_renyi_entropy(parse_model(model), n, gamma, mode).value;
        },
        py::arg("model_json"), py::arg("n"), py::arg("gamma"), py::arg("context_length") = py::none(),
        "Infinite past when context_length is None.");
  m.def("conditional_min_entropy",
        [](const std::string& model, std::size_t n) {
          auto v = conditional_min_entropy(parse_model(model), n);
          return py::make_tuple(v.value, v.lower_bound);
        },
        py::arg("model_json"), py::arg("n"), "Returns (value, is_lower_bound).");
  m.def("plugin_entropy",
        [](const std::vector<Symbol>& x, std::size_t k, double gamma) {
          return plugin_entropy_from_corpus(to_sequence(x, std::nullopt), k, gamma);
        },
        py::arg("symbols"), py::arg("k"), py::arg("gamma"));

  m.def("check_bounds",
        [](const std::string& model, const std::vector<std::string>& checks, std::size_t replicas,
           std::uint64_t seed, unsigned workers) {
          std::vector<CheckId> ids;
          for (const auto& c : checks) ids.push_back(check_id_from_string(c));
          MonteCarloConfig mc;
          mc.replicas = replicas;
          mc.seed = seed;
          mc.workers = workers;
          SuiteResult r;
          {
            py::gil_scoped_release release;
            r = run_bound_suite(parse_model(model), ids, BoundsGrid{}, mc, geometric_grid(16, 1 << 14, 2.0));
          }
          nlohmann::json j = nlohmann::json::array();
          for (const auto& rep : r.reports) j.push_back(report_to_json(rep));
          return py::make_tuple(j.dump(), r.capability_errors);
        },
        py::arg("model_json"), py::arg("checks"), py::arg("replicas") = 100000, py::arg("seed") = 1,
        py::arg("workers") = 1, "Returns (reports_json, capability_errors).");

  m.def("geometric_grid", &geometric_grid, py::arg("min_n"), py::arg("max_n"), py::arg("ratio"));
  m.def("repetition_experiment",
        [](const std::vector<Symbol>& x, const std::vector<std::size_t>& grid, std::uint64_t seed,
           std::size_t replicates) {
          const Sequence s = to_sequence(x, std::nullopt);
          std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
          for (const auto& r : repetition_experiment(s, make_offset_plan(s.size(), grid, seed, replicates))) {
            out.emplace_back(r.n, r.offset, r.repetition);
          }
          return out;
        },
        py::arg("symbols"), py::arg("grid"), py::arg("seed"), py::arg("replicates") = 1,
        "Rows (n, offset, L).");
  m.def("fit_power_law_log",
        [](const std::vector<std::pair<double, double>>& points) {
          auto f = fit_power_law_log(points);
          py::dict d;
          d["A"] = f.A;
          d["alpha"] = f.alpha;
          d["A_base10"] = f.A_base10;
          d["residual_rms"] = f.residual_rms;
          d["points_used"] = f.points_used;
          d["points_excluded"] = f.points_excluded;
          return d;
        },
        py::arg("points"));
  m.def("permutation_baseline",
        [](const std::vector<Symbol>& x, std::uint64_t seed) {
          auto p = permutation_baseline(to_sequence(x, std::nullopt), seed);
          return std::vector<Symbol>(p.symbols().begin(), p.symbols().end());
        },
        py::arg("symbols"), py::arg("seed"));
}
