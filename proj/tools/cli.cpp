#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "maxrep/bounds.hpp"
#include "maxrep/corpus.hpp"
#include "maxrep/csv.hpp"
#include "maxrep/entropy.hpp"
#include "maxrep/errors.hpp"
#include "maxrep/model_io.hpp"
#include "maxrep/processes.hpp"

namespace maxrep {

namespace {

using nlohmann::json;

// Ties each option to a key of the resolved configuration. Values given on
// the command line win over values read from --config.
class Settings {
 public:
  explicit Settings(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* option(const std::string& flag, const std::string& key, T& var,
                      const std::string& help) {
    CLI::Option* opt = app_->add_option(flag, var, help)->capture_default_str();
    remember(opt, key, var);
    return opt;
  }

  CLI::Option* flag(const std::string& flag, const std::string& key, bool& var,
                    const std::string& help) {
    CLI::Option* opt = app_->add_flag(flag, var, help);
    remember(opt, key, var);
    return opt;
  }

  void apply(const json& config) {
    for (const auto& [key, value] : config.items()) {
      if (key == "subcommand") continue;
      if (!known(key)) throw InputError("unknown key '" + key + "' in config file");
    }
    for (auto& b : bindings_) {
      if (b.opt->count() == 0 && config.contains(b.key)) b.load(config.at(b.key));
    }
  }

  json resolved(const std::string& subcommand) const {
    json j;
    j["subcommand"] = subcommand;
    for (const auto& b : bindings_) b.save(j[b.key]);
    return j;
  }

  bool given(const std::string& key) const {
    for (const auto& b : bindings_) {
      if (b.key == key) return b.opt->count() > 0 || b.from_config;
    }
    return false;
  }

 private:
  struct Binding {
    CLI::Option* opt;
    std::string key;
    std::function<void(json&)> save;
    std::function<void(const json&)> load_value;
    bool from_config = false;
    void load(const json& j) {
      load_value(j);
      from_config = true;
    }
  };

  template <class T>
  void remember(CLI::Option* opt, const std::string& key, T& var) {
    bindings_.push_back({opt, key, [&var](json& j) { j = var; },
                         [&var](const json& j) { var = j.get<T>(); }});
  }

  bool known(const std::string& key) const {
    for (const auto& b : bindings_) {
      if (b.key == key) return true;
    }
    return false;
  }

  CLI::App* app_;
  std::vector<Binding> bindings_;
};

struct Common {
  std::string config;
  std::string output = "-";
  std::string format = "csv";
  unsigned workers = 1;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* sub, Settings& s, Common& c) {
  sub->add_option("--config", c.config, "JSON config; command-line flags override its values");
  sub->add_option("-o,--output", c.output, "Output path, '-' for stdout")->capture_default_str();
  s.option("--format", "format", c.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  s.option("--workers", "workers", c.workers, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void load_config(Settings& s, const Common& c, const std::string& subcommand) {
  if (c.config.empty()) return;
  json j = read_json(c.config);
  if (!j.is_object()) throw InputError("config must be a JSON object");
  if (j.contains("subcommand") && j["subcommand"] != subcommand) {
    throw InputError("config was written for '" + j["subcommand"].get<std::string>() +
                     "', not '" + subcommand + "'");
  }
  s.apply(j);
}

class Output {
 public:
  Output(const Common& c, std::ostream& out, std::ostream& err) : c_(c), out_(out), err_(err) {}

  void write(const std::string& body) {
    if (c_.output == "-") {
      out_ << body;
      out_.flush();
      return;
    }
    std::ofstream f(c_.output, std::ios::binary);
    if (!f) throw InputError("cannot write '" + c_.output + "'");
    f << body;
  }

  void write_config(const json& resolved) {
    const std::string text = resolved.dump(2) + "\n";
    if (c_.output == "-") {
      err_ << text;
      return;
    }
    std::ofstream f(c_.output + ".config.json", std::ios::binary);
    if (!f) throw InputError("cannot write '" + c_.output + ".config.json'");
    f << text;
  }

  void write_sidecar(const std::string& suffix, const std::string& body) {
    if (c_.output == "-") return;
    std::ofstream f(c_.output + suffix, std::ios::binary);
    f << body;
  }

 private:
  const Common& c_;
  std::ostream& out_;
  std::ostream& err_;
};

json number(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  Common common;
  std::string corpus;
  std::string alphabet_mode = "bytes";
  std::string mapping;
  std::size_t grid_min = 16;
  std::size_t grid_max = 0;  // 0: half the source length
  double grid_ratio = std::pow(2.0, 0.25);
  std::size_t replicates = 1;
  bool permute = false;
};

const char* kFitHeader = "source,A,alpha,A_base10,residual_rms,points_used,points_excluded,n_min,n_max\n";

std::string fit_row(const std::string& source, const PowerLawFit& f) {
  std::ostringstream o;
  o << source << ',' << format_number(f.A) << ',' << format_number(f.alpha) << ','
    << format_number(f.A_base10) << ',' << format_number(f.residual_rms) << ',' << f.points_used
    << ',' << f.points_excluded << ',' << format_number(f.n_min) << ',' << format_number(f.n_max)
    << '\n';
  return o.str();
}

json fit_json(const std::string& source, const PowerLawFit& f) {
  return {{"source", source},       {"A", f.A},
          {"alpha", f.alpha},       {"A_base10", f.A_base10},
          {"residual_rms", f.residual_rms}, {"points_used", f.points_used},
          {"points_excluded", f.points_excluded}, {"n_min", f.n_min},
          {"n_max", f.n_max}};
}

int run_analyze(AnalyzeArgs& a, Output& out) {
  const auto mode = alphabet_mode_from_string(a.alphabet_mode);
  std::optional<std::filesystem::path> mapping;
  if (!a.mapping.empty()) mapping = a.mapping;
  const IngestResult ingested = ingest_text(a.corpus, mode, mapping);
  const Sequence& text = ingested.sequence;
  const std::size_t max_n = a.grid_max ? a.grid_max : text.size() / 2;
  const auto grid = geometric_grid(a.grid_min, max_n, a.grid_ratio);
  const auto plan = make_offset_plan(text.size(), grid, a.common.seed, a.replicates);

  std::vector<std::pair<std::string, std::vector<ExperimentRow>>> series;
  series.emplace_back("text", repetition_experiment(text, plan, a.common.workers));
  if (a.permute) {
    const Sequence shuffled = permutation_baseline(text, derive_seed(a.common.seed, 1));
    series.emplace_back("permutation", repetition_experiment(shuffled, plan, a.common.workers));
  }
  std::vector<PowerLawFit> fits;
  for (const auto& s : series) fits.push_back(fit_power_law_log(average_replicates(s.second)));

  if (a.common.format == "csv") {
    std::ostringstream o;
    o << "source,n,offset,L\n";
    for (const auto& [name, rows] : series) {
      for (const auto& r : rows) o << name << ',' << r.n << ',' << r.offset << ',' << r.repetition << '\n';
    }
    o << '\n' << kFitHeader;
    for (std::size_t i = 0; i < series.size(); ++i) o << fit_row(series[i].first, fits[i]);
    out.write(o.str());
    if (!ingested.symbol_table.empty()) out.write_sidecar(".symbols.json", json(ingested.symbol_table).dump() + "\n");
  } else {
    json j;
    j["source_length"] = text.size();
    j["alphabet_size"] = text.alphabet_size();
    j["rows"] = json::array();
    for (const auto& [name, rows] : series) {
      for (const auto& r : rows) j["rows"].push_back({{"source", name}, {"n", r.n}, {"offset", r.offset}, {"L", r.repetition}});
    }
    j["fits"] = json::array();
    for (std::size_t i = 0; i < series.size(); ++i) j["fits"].push_back(fit_json(series[i].first, fits[i]));
    if (!ingested.symbol_table.empty()) j["symbol_table"] = ingested.symbol_table;
    out.write(j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  Common common;
  std::string input;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
}

int run_fit(FitArgs& a, Output& out) {
  std::ifstream in(a.input);
  if (!in) throw InputError("cannot read '" + a.input + "'");
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) header = split_csv_line(line);
  }
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto n_col = column("n");
  const auto l_col = column("L");
  const auto source_col = column("source");
  if (!n_col || !l_col) throw InputError("input needs 'n' and 'L' columns");

  // Replicates are averaged per (source, n), keeping first-seen order.
  std::vector<std::string> sources;
  std::map<std::string, std::vector<std::pair<double, std::pair<double, std::size_t>>>> data;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) break;  // a following block (e.g. fit summary) is not data
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw InputError("line " + std::to_string(line_no) + ": wrong number of fields");
    const std::string source = source_col ? cells[*source_col] : "input";
    if (!data.count(source)) sources.push_back(source);
    auto& points = data[source];
    const double n = parse_double(cells[*n_col], line_no);
    const double L = parse_double(cells[*l_col], line_no);
    if (!points.empty() && points.back().first == n) {
      points.back().second.first += L;
      points.back().second.second += 1;
    } else {
      points.push_back({n, {L, 1}});
    }
  }
  std::vector<std::pair<std::string, PowerLawFit>> fits;
  for (const auto& s : sources) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, acc] : data[s]) pts.emplace_back(n, acc.first / static_cast<double>(acc.second));
    fits.emplace_back(s, fit_power_law_log(pts));
  }
  if (fits.empty()) throw InputError("fewer than 2 usable points");
  if (a.common.format == "csv") {
    std::string body = kFitHeader;
    for (const auto& [s, f] : fits) body += fit_row(s, f);
    out.write(body);
  } else {
    json j = json::array();
    for (const auto& [s, f] : fits) j.push_back(fit_json(s, f));
    out.write(j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Common common;
  std::string model;
  std::size_t n = 1000;
};

int run_simulate(SimulateArgs& a, Output& out) {
  const ProcessModel model = load_model(a.model);
  const Sequence x = sample(model, a.n, a.common.seed);
  if (a.common.format == "csv") {
    std::ostringstream o;
    o << "t,symbol\n";
    for (std::size_t i = 0; i < x.size(); ++i) o << i + 1 << ',' << x[i] << '\n';
    out.write(o.str());
  } else {
    json j;
    j["model"] = model.name.empty() ? to_string(model.kind()) : model.name;
    j["n"] = a.n;
    j["seed"] = a.common.seed;
    j["alphabet_size"] = x.alphabet_size();
    j["symbols"] = std::vector<Symbol>(x.symbols().begin(), x.symbols().end());
    out.write(j.dump() + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- entropy

struct EntropyArgs {
  Common common;
  std::string model;
  std::string corpus;
  std::string alphabet_mode = "bytes";
  std::vector<std::string> functionals{"shannon"};
  double gamma = 2.0;
  std::size_t n_min = 1;
  std::size_t n_max = 8;
  std::size_t context_length = 0;  // 0: N(n) + 1
  std::size_t replicas = 10'000;
  bool bits = false;
};

int run_entropy(EntropyArgs& a, Output& out) {
  if (a.model.empty() == a.corpus.empty()) throw InputError("give exactly one of --model and --corpus");
  if (a.n_min == 0 || a.n_max < a.n_min) throw InputError("need 1 <= n-min <= n-max");
  std::vector<std::size_t> ns;
  for (std::size_t n = a.n_min; n <= a.n_max; ++n) ns.push_back(n);

  std::vector<EntropyCurve> curves;
  if (!a.model.empty()) {
    const ProcessModel model = load_model(a.model);
    for (const auto& name : a.functionals) {
      CurveRequest req;
      req.functional = functional_from_string(name);
      req.gamma = a.gamma;
      if (a.context_length) req.context_length = a.context_length;
      req.replicas = a.replicas;
      req.seed = a.common.seed;
      auto curve = compute_curve(model, req, ns);
      curve.source = a.model;
      curves.push_back(std::move(curve));
    }
  } else {
    const Sequence x = ingest_text(a.corpus, alphabet_mode_from_string(a.alphabet_mode)).sequence;
    for (const auto& name : a.functionals) {
      const Functional f = functional_from_string(name);
      double gamma;
      switch (f) {
        case Functional::hartley: gamma = 0.0; break;
        case Functional::shannon: gamma = 1.0; break;
        case Functional::renyi: gamma = a.gamma; break;
        case Functional::min: gamma = kInfiniteOrder; break;
        default:
          throw CapabilityError("functional '" + name + "' needs a model; corpora support hartley, shannon, renyi and min");
      }
      EntropyCurve curve;
      curve.functional = f;
      curve.gamma = gamma;
      curve.source = a.corpus;
      for (std::size_t n : ns) {
        if (n > x.size()) break;
        curve.points.push_back({n, plugin_entropy_from_corpus(x, n, gamma), 0.0, EntropyMethod::plugin_empirical});
      }
      curves.push_back(std::move(curve));
    }
  }

  if (a.common.format == "csv") {
    out.write(curves_to_csv(curves, a.bits));
  } else {
    json j = json::array();
    for (const auto& c : curves) {
      json pts = json::array();
      for (const auto& p : c.points) {
        json row = {{"n", p.n}, {"value_nats", number(p.value)}, {"method", to_string(p.method)}};
        if (p.std_error > 0.0) row["std_error"] = number(p.std_error);
        if (a.bits) row["value_bits"] = number(p.value / std::log(2.0));
        pts.push_back(row);
      }
      j.push_back({{"functional", to_string(c.functional)}, {"gamma", number(c.gamma)},
                   {"source", c.source}, {"points", pts}});
    }
    out.write(j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  Common common;
  std::string model;
  std::vector<std::string> checks;  // empty: all
  std::size_t replicas = 100'000;
  std::uint64_t max_shift = std::uint64_t{1} << 22;
  std::vector<double> gammas = BoundsGrid{}.gammas;
  std::vector<double> Cs = BoundsGrid{}.Cs;
  std::vector<double> tail_Cs = BoundsGrid{}.tail_Cs;
  std::vector<double> ms = BoundsGrid{}.ms;
  std::vector<std::size_t> trimmed_k = BoundsGrid{}.trimmed_k;
  std::size_t kac_k = BoundsGrid{}.kac_k;
  std::size_t growth_n_max = 1 << 14;
  std::size_t burn_in = GrowthOptions{}.burn_in;
  double alpha = GrowthOptions{}.alpha;
  double growth_gamma = GrowthOptions{}.gamma;
  bool psi_mixing = false;
  double kac_fault_factor = 1.0;
};

int run_bounds(BoundsArgs& a, Output& out, std::ostream& err) {
  const ProcessModel model = load_model(a.model);
  std::vector<CheckId> checks;
  if (a.checks.empty()) {
    checks = all_checks();
  } else {
    for (const auto& c : a.checks) checks.push_back(check_id_from_string(c));
  }
  BoundsGrid grid;
  grid.gammas = a.gammas;
  grid.Cs = a.Cs;
  grid.tail_Cs = a.tail_Cs;
  grid.ms = a.ms;
  grid.trimmed_k = a.trimmed_k;
  grid.kac_k = a.kac_k;
  MonteCarloConfig mc;
  mc.replicas = a.replicas;
  mc.seed = a.common.seed;
  mc.workers = a.common.workers;
  mc.max_shift = a.max_shift;
  mc.kac_fault_factor = a.kac_fault_factor;
  GrowthOptions growth;
  growth.burn_in = a.burn_in;
  growth.alpha = a.alpha;
  growth.gamma = a.growth_gamma;

  SuiteResult result = run_bound_suite(model, checks, grid, mc, geometric_grid(16, a.growth_n_max, 2.0), growth);
  if (a.psi_mixing) {
    result.capability_errors.push_back(
        "psi_mixing: psi-mixing coefficients are not computed; no check was run for that hypothesis");
  }
  for (const auto& e : result.capability_errors) err << "capability: " << e << '\n';

  if (a.common.format == "csv") {
    out.write(reports_to_csv(result.reports));
  } else {
    json j;
    j["reports"] = json::array();
    for (const auto& r : result.reports) j["reports"].push_back(report_to_json(r));
    j["capability_errors"] = result.capability_errors;
    out.write(j.dump(2) + "\n");
  }
  if (result.any_violated()) return kExitViolation;
  if (result.reports.empty() && !result.capability_errors.empty()) return kExitCapability;
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Repetition statistics, block entropies and their inequalities", "maxrep"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Maximal repetition of random-offset substrings and a power-law-logarithmic fit");
  Settings analyze_s(analyze_cmd);
  add_common(analyze_cmd, analyze_s, analyze.common);
  analyze_s.option("corpus", "corpus", analyze.corpus, "Input text file");
  analyze_s.option("--alphabet-mode", "alphabet_mode", analyze.alphabet_mode, "bytes, unicode_codepoints or mapped_tokens")
      ->check(CLI::IsMember({"bytes", "unicode_codepoints", "mapped_tokens"}));
  analyze_s.option("--mapping", "mapping", analyze.mapping, "Token table, one token per line (mapped_tokens)");
  analyze_s.option("--grid-min", "grid_min", analyze.grid_min, "Smallest substring length");
  analyze_s.option("--grid-max", "grid_max", analyze.grid_max, "Largest substring length, 0 for half the source");
  analyze_s.option("--grid-ratio", "grid_ratio", analyze.grid_ratio, "Geometric grid ratio");
  analyze_s.option("--seed", "seed", analyze.common.seed, "Offset sampling seed");
  analyze_s.option("--replicates", "replicates", analyze.replicates, "Offsets per length, L averaged for the fit")
      ->check(CLI::PositiveNumber);
  analyze_s.flag("--permute", "permute", analyze.permute, "Also analyze a seeded random permutation of the text");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit L = A (log n)^alpha to a CSV with n and L columns");
  Settings fit_s(fit_cmd);
  add_common(fit_cmd, fit_s, fit.common);
  fit_s.option("input", "input", fit.input, "CSV file with 'n' and 'L' columns (optional 'source')");

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Sample a trajectory from a model file");
  Settings simulate_s(simulate_cmd);
  add_common(simulate_cmd, simulate_s, simulate.common);
  simulate_s.option("--model", "model", simulate.model, "Model JSON file");
  simulate_s.option("-n,--length", "n", simulate.n, "Trajectory length");
  simulate_s.option("--seed", "seed", simulate.common.seed, "Sampling seed (default: the model file's seed, else 1)");

  EntropyArgs entropy;
  auto* entropy_cmd = app.add_subcommand("entropy", "Block entropy curves of a model, or plug-in curves of a corpus");
  Settings entropy_s(entropy_cmd);
  add_common(entropy_cmd, entropy_s, entropy.common);
  entropy_s.option("--model", "model", entropy.model, "Model JSON file");
  entropy_s.option("--corpus", "corpus", entropy.corpus, "Text file (plug-in estimates, biased)");
  entropy_s.option("--alphabet-mode", "alphabet_mode", entropy.alphabet_mode, "Corpus alphabet: bytes or unicode_codepoints")
      ->check(CLI::IsMember({"bytes", "unicode_codepoints"}));
  entropy_s.option("--functional", "functionals", entropy.functionals,
                   "hartley, shannon, renyi, min, cond_renyi, cond_min, tilde_cond_renyi");
  entropy_s.option("--gamma", "gamma", entropy.gamma, "Order for the renyi functionals");
  entropy_s.option("--n-min", "n_min", entropy.n_min, "Smallest block length");
  entropy_s.option("--n-max", "n_max", entropy.n_max, "Largest block length");
  entropy_s.option("--context-length", "context_length", entropy.context_length,
                   "Past symbols for tilde_cond_renyi, 0 for alphabet^n + 1");
  entropy_s.option("--replicas", "replicas", entropy.replicas, "Monte Carlo contexts when enumeration is too large");
  entropy_s.option("--seed", "seed", entropy.common.seed, "Monte Carlo seed");
  entropy_s.flag("--bits", "bits", entropy.bits, "Add a value_bits column");

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Monte Carlo and trajectory checks of the repetition inequalities");
  Settings bounds_s(bounds_cmd);
  add_common(bounds_cmd, bounds_s, bounds.common);
  bounds_s.option("--model", "model", bounds.model, "Model JSON file");
  bounds_s.option("--check", "checks", bounds.checks,
                  "Checks to run (default all): recurrence_repetition, trimmed_recurrence, kac, subword, growth_T1, growth_T2, growth_T6, growth_T7");
  bounds_s.option("--replicas", "replicas", bounds.replicas, "Monte Carlo replicas per grid point")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  bounds_s.option("--seed", "seed", bounds.common.seed, "Master seed");
  bounds_s.option("--max-shift", "max_shift", bounds.max_shift, "Backward search limit for recurrence times");
  bounds_s.option("--gammas", "gammas", bounds.gammas, "gamma grid for the recurrence tail bound");
  bounds_s.option("--Cs", "Cs", bounds.Cs, "C grid for the trimmed recurrence bound");
  bounds_s.option("--tail-Cs", "tail_Cs", bounds.tail_Cs, "C grid for the recurrence tail bound");
  bounds_s.option("--ms", "ms", bounds.ms, "m grid for the subword/entropy bound");
  bounds_s.option("--trimmed-k", "trimmed_k", bounds.trimmed_k, "Block lengths for the trimmed recurrence bound");
  bounds_s.option("--kac-k", "kac_k", bounds.kac_k, "Word length for the Kac check");
  bounds_s.option("--growth-n-max", "growth_n_max", bounds.growth_n_max, "Trajectory length for growth checks");
  bounds_s.option("--burn-in", "burn_in", bounds.burn_in, "Growth checkpoints below this are inconclusive");
  bounds_s.option("--alpha", "alpha", bounds.alpha, "Exponent below 1 for the (log n)^alpha lower envelope");
  bounds_s.option("--growth-gamma", "growth_gamma", bounds.growth_gamma, "Renyi order for the conditional-Renyi envelope");
  bounds_s.flag("--psi-mixing", "psi_mixing", bounds.psi_mixing, "Request psi-mixing checks (reported as unsupported)");
  bounds_s.option("--kac-fault-factor", "kac_fault_factor", bounds.kac_fault_factor,
                  "Testing only: scales simulated recurrence times in the Kac mean");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) {
      load_config(analyze_s, analyze.common, "analyze");
      if (analyze.corpus.empty()) throw InputError("analyze needs a corpus path");
      Output o(analyze.common, out, err);
      o.write_config(analyze_s.resolved("analyze"));
      return run_analyze(analyze, o);
    }
    if (fit_cmd->parsed()) {
      load_config(fit_s, fit.common, "fit");
      if (fit.input.empty()) throw InputError("fit needs an input CSV");
      Output o(fit.common, out, err);
      o.write_config(fit_s.resolved("fit"));
      return run_fit(fit, o);
    }
    if (simulate_cmd->parsed()) {
      load_config(simulate_s, simulate.common, "simulate");
      if (simulate.model.empty()) throw InputError("simulate needs --model");
      if (!simulate_s.given("seed")) simulate.common.seed = load_model(simulate.model).seed.value_or(1);
      Output o(simulate.common, out, err);
      o.write_config(simulate_s.resolved("simulate"));
      return run_simulate(simulate, o);
    }
    if (entropy_cmd->parsed()) {
      load_config(entropy_s, entropy.common, "entropy");
      Output o(entropy.common, out, err);
      o.write_config(entropy_s.resolved("entropy"));
      return run_entropy(entropy, o);
    }
    if (bounds_cmd->parsed()) {
      load_config(bounds_s, bounds.common, "bounds");
      if (bounds.model.empty()) throw InputError("bounds needs --model");
      Output o(bounds.common, out, err);
      o.write_config(bounds_s.resolved("bounds"));
      return run_bounds(bounds, o, err);
    }
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapability;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace maxrep
