// Acceptance run: one PASS/FAIL (or SKIP) line per criterion, nonzero exit on
// any FAIL. Slow on purpose; the unit tests cover the same code at small sizes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "maxrep/bounds.hpp"
#include "maxrep/corpus.hpp"
#include "maxrep/entropy.hpp"
#include "maxrep/strstat.hpp"
#include "maxrep/suffix_index.hpp"
#include "models.hpp"
#include "oracles.hpp"

#ifndef MAXREP_FIXTURE_DIR
#define MAXREP_FIXTURE_DIR "tests/fixtures"
#endif

using namespace maxrep;
using namespace testmodels;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the first few failure messages of one criterion.
struct Outcome {
  std::size_t failures = 0;
  std::string first;
  std::string detail;

  void fail(const std::string& why) {
    if (failures++ == 0) first = why;
  }
  bool ok() const { return failures == 0; }
};

int g_failed = 0;

void criterion(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs = seconds_since(t0);
  if (!o.ok()) ++g_failed;
  std::printf("%s %s (%.1f s)", o.ok() ? "PASS" : "FAIL", name.c_str(), secs);
  if (!o.detail.empty()) std::printf(" %s", o.detail.c_str());
  if (!o.ok()) std::printf(" -- %zu failure(s), first: %s", o.failures, o.first.c_str());
  std::printf("\n");
  std::fflush(stdout);
}

void skip(const std::string& name, const std::string& why) {
  std::printf("SKIP %s -- %s\n", name.c_str(), why.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct RandomString {
  oracle::Word w;
  Symbol alphabet;
};

std::vector<RandomString> random_corpus() {
  std::mt19937_64 rng(20240601);
  std::vector<RandomString> out;
  out.reserve(10'000);
  for (int i = 0; i < 10'000; ++i) {
    const auto n = static_cast<std::size_t>(1 + rng() % 200);
    const auto a = static_cast<Symbol>(2 + rng() % 7);
    out.push_back({oracle::random_word(rng, n, a), a});
  }
  return out;
}

MonteCarloConfig mc_full(std::uint64_t seed) {
  MonteCarloConfig mc;
  mc.replicas = 100'000;
  mc.seed = seed;
  return mc;
}

// CLI plumbing for the end-to-end criteria.
struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "maxrep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path d = [] {
    fs::path p = fs::temp_directory_path() / "maxrep_acceptance";
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string put(const std::string& name, const std::string& body) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << body;
  return p.string();
}

// Fitted alpha of the text and of its permutation, via the analyze subcommand.
std::pair<double, double> analyze_alphas(const std::string& corpus, Outcome& o) {
  const auto out = (scratch() / "analyze.json").string();
  const auto r = cli({"analyze", corpus, "--permute", "--format", "json", "-o", out});
  if (r.code != kExitOk) {
    o.fail("analyze exit " + std::to_string(r.code) + ": " + r.err);
    return {NAN, NAN};
  }
  const auto j = nlohmann::json::parse(slurp(out));
  double text = NAN, perm = NAN;
  for (const auto& f : j["fits"]) {
    if (f["source"] == "text") text = f["alpha"].get<double>();
    if (f["source"] == "permutation") perm = f["alpha"].get<double>();
  }
  return {text, perm};
}

}  // namespace

int main() {
  const auto corpus = random_corpus();

  criterion("oracle_equivalence", [&](Outcome& o) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(7);
    std::size_t compared = 0;
    for (const auto& [w, a] : corpus) {
      const Sequence x(w, a);
      const std::size_t L = maximal_repetition(x);
      const std::size_t ref = oracle::max_repetition(w);
      if (L != ref) o.fail("L=" + std::to_string(L) + " oracle=" + std::to_string(ref));
      std::vector<std::size_t> ks;
      for (std::size_t k = 1; k <= std::min(ref + 2, w.size()); ++k) ks.push_back(k);
      for (int r = 0; r < 3; ++r) ks.push_back(1 + rng() % (w.size() + 1));
      for (std::size_t k : ks) {
        ++compared;
        if (subword_complexity(x, k) != oracle::subword_complexity(w, k)) {
          o.fail("f(" + std::to_string(k) + ") mismatch at n=" + std::to_string(w.size()));
        }
      }
    }
    const double secs = seconds_since(t0);
    if (secs >= 60.0) o.fail(fmt("runtime %.1f s >= 60 s", secs));
    o.detail = "strings=" + std::to_string(corpus.size()) + " f_checks=" + std::to_string(compared);
  });

  criterion("pigeonhole_identity", [&](Outcome& o) {
    std::size_t checked = 0;
    for (const auto& [w, a] : corpus) {
      const std::size_t n = w.size();
      const std::size_t L = maximal_repetition(Sequence(w, a));
      const SuffixIndex idx(w);
      for (std::size_t k = 1; k <= n; ++k) {
        ++checked;
        const bool short_rep = L < k;
        const bool all_distinct = idx.distinct_blocks(k) == n - k + 1;
        if (short_rep != all_distinct) {
          o.fail("n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
      }
    }
    o.detail = "pairs=" + std::to_string(checked);
  });

  criterion("kac_identity", [&](Outcome& o) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    auto check = [&](const ProcessModel& m, std::uint64_t seed, bool fair) {
      const auto reports = check_kac(m, 3, {}, {}, mc_full(seed));
      if (reports.size() != 8) o.fail("expected 8 words, got " + std::to_string(reports.size()));
      for (const auto& r : reports) {
        const std::string word = r.word.value_or("");
        oracle::Word w;
        for (char c : word) {
          if (c != '.') w.push_back(static_cast<Symbol>(c - '0'));
        }
        const double expect = fair ? 8.0 : 1.0 / oracle::block_prob(m, w);
        if (std::abs(r.rhs - expect) > 1e-9 * expect) {
          o.fail("rhs " + word + fmt(" %.12g vs %.12g", r.rhs, expect));
        }
        if (r.replicas < 100'000) o.fail("replicas " + std::to_string(r.replicas));
        const double z = std::abs(r.lhs - expect) / r.lhs_se;
        worst = std::max(worst, z);
        if (!(z <= 4.0)) o.fail(m.name + " word " + word + fmt(" z=%.2f", z));
        if (r.verdict != Verdict::holds) o.fail("verdict " + to_string(r.verdict));
      }
    };
    auto coin = fair_coin();
    coin.name = "fair_coin";
    auto chain = sticky_markov();
    chain.name = "sticky_markov";
    check(coin, 101, true);
    check(chain, 202, false);
    const double secs = seconds_since(t0);
    if (secs >= 120.0) o.fail(fmt("runtime %.1f s >= 120 s", secs));
    o.detail = fmt("worst |z|=%.2f", worst);
  });

  criterion("inequality_suite", [&](Outcome& o) {
    const std::vector<CheckId> checks{CheckId::recurrence_repetition, CheckId::trimmed_recurrence,
                                      CheckId::kac, CheckId::subword};
    const std::vector<std::string> ids{"max_rep_recurrence", "max_rep_recurrence_ii", "prob_recurrence",
                                       "prob_recurrence_ii",  "max_rep_subword",       "max_rep_subword_ii",
                                       "max_rep_entropy"};
    std::vector<std::pair<std::string, ProcessModel>> models{
        {"iid", fair_coin()}, {"markov", sticky_markov()}, {"hmm", three_state_hmm()}, {"dithered", dithered()}};
    std::size_t total = 0, holds = 0, inconclusive = 0;
    for (auto& [label, m] : models) {
      m.name = label;
      const auto res = run_bound_suite(m, checks, BoundsGrid{}, mc_full(3), {});
      for (const auto& e : res.capability_errors) o.fail(label + " capability: " + e);
      for (const auto& id : ids) {
        bool seen = false;
        for (const auto& r : res.reports) seen = seen || r.bound_id == id;
        if (!seen) o.fail(label + " has no " + id + " rows");
      }
      for (const auto& r : res.reports) {
        ++total;
        if (r.replicas < 100'000) o.fail(label + " " + r.bound_id + " replicas " + std::to_string(r.replicas));
        if (r.verdict == Verdict::violated) {
          o.fail(label + " " + r.bound_id + " n=" + std::to_string(r.n) + " k=" + std::to_string(r.k) +
                 fmt(" lhs=%.6g rhs=%.6g se=%.3g", r.lhs, r.rhs, r.lhs_se));
        }
        if (r.verdict == Verdict::holds) ++holds;
        if (r.verdict == Verdict::inconclusive) ++inconclusive;
      }
    }
    o.detail = "rows=" + std::to_string(total) + " holds=" + std::to_string(holds) +
               " inconclusive=" + std::to_string(inconclusive);
  });

  criterion("entropy_chain", [&](Outcome& o) {
    const double tol = 1e-9;
    std::size_t checked = 0;
    for (const auto& m : {fair_coin(), biased_iid(), sticky_markov(), skewed_markov()}) {
      const double h = entropy_rate(m);
      for (std::size_t n = 1; n <= 10; ++n) {
        const double cmin = conditional_min_entropy(m, n).value;
        const double shannon = renyi_block_entropy(m, n, 1.0).value;
        const double hartley = renyi_block_entropy(m, n, 0.0).value;
        if (std::abs(shannon - oracle::renyi(m, n, 1.0)) > tol) o.fail("H(n) vs enumeration");
        if (std::abs(hartley - oracle::renyi(m, n, 0.0)) > tol) o.fail("H0(n) vs enumeration");
        if (std::abs(cmin - oracle::finite_context_min(m, n, 1)) > tol) o.fail("min-cond vs enumeration");
        for (double g : {1.5, 2.0, 3.0}) {
          const double cg = conditional_renyi_entropy(m, n, g).value;
          if (std::abs(cg - oracle::finite_context_renyi(m, n, g, 1)) > tol) {
            o.fail("cond renyi vs enumeration" + fmt(" n=%g g=%g", double(n), g));
          }
          if (!(cmin <= cg + tol)) o.fail(fmt("cond-min > cond-renyi at n=%g g=%g", double(n), g));
          if (!(cg <= h * n + tol)) o.fail(fmt("cond-renyi > h n at n=%g g=%g", double(n), g));
          ++checked;
        }
        if (!(h * n <= shannon + tol)) o.fail(fmt("h n > H(n) at n=%g", double(n)));
        if (!(shannon <= hartley + tol)) o.fail(fmt("H(n) > H0(n) at n=%g", double(n)));
      }
    }
    // Transfer-matrix powers against block enumeration, both in the library
    // and in the oracle.
    EntropyOptions power, enumerate;
    power.method = EntropyMethod::matrix_power;
    enumerate.method = EntropyMethod::exact_enumeration;
    for (const auto& m : {sticky_markov(), skewed_markov()}) {
      for (std::size_t n = 1; n <= 8; ++n) {
        for (double g : {0.5, 1.5, 2.0, 3.0}) {
          const double a = renyi_block_entropy(m, n, g, power).value;
          const double b = renyi_block_entropy(m, n, g, enumerate).value;
          const double c = oracle::renyi(m, n, g);
          if (std::abs(a - b) > tol || std::abs(a - c) > tol) {
            o.fail(fmt("matrix power %.12g vs enumeration %.12g / %.12g", a, b, c));
          }
          ++checked;
        }
      }
    }
    o.detail = "checks=" + std::to_string(checked);
  });

  criterion("min_entropy_superadditivity", [&](Outcome& o) {
    std::size_t pairs = 0;
    for (const auto& m : {fair_coin(), biased_iid(), sticky_markov(), skewed_markov(), periodic(7, 2),
                          periodic(16, 4)}) {
      std::vector<double> c(17);
      for (std::size_t n = 1; n <= 16; ++n) c[n] = conditional_min_entropy(m, n).value;
      for (std::size_t a = 1; a <= 8; ++a) {
        for (std::size_t b = 1; b <= 8; ++b) {
          ++pairs;
          if (!(c[a + b] >= c[a] + c[b] - 1e-9)) o.fail(fmt("m=%g n=%g", double(a), double(b)));
        }
      }
    }
    o.detail = "pairs=" + std::to_string(pairs);
  });

  criterion("log_growth_upper_envelope", [&](Outcome& o) {
    std::vector<std::size_t> grid;
    for (std::size_t n = 256; n <= 65536; n *= 2) grid.push_back(n);
    grid.push_back(100'000);
    auto coin = fair_coin();
    coin.name = "fair_coin";
    std::size_t worst_L = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto reports = check_growth_theorems(coin, GrowthTheorem::T2, grid, seed);
      if (reports.size() != grid.size()) o.fail("missing grid points");
      // Independent recomputation of L on the same trajectory.
      const auto x = sample(coin, grid.back(), seed);
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const double envelope = 3.0 * std::log(static_cast<double>(grid[i])) / std::log(2.0);
        if (std::abs(r.rhs - envelope) > 1e-9) o.fail(fmt("envelope %.12g vs %.12g", r.rhs, envelope));
        const std::size_t L = maximal_repetition(x.symbols().first(grid[i]));
        worst_L = std::max(worst_L, L);
        if (static_cast<double>(L) != r.lhs) o.fail("report L differs from recomputed L");
        if (!(L < envelope)) o.fail(fmt("seed %g n=%g L=%g", double(seed), double(grid[i]), double(L)));
        if (r.verdict != Verdict::holds) o.fail("verdict " + to_string(r.verdict));
      }
    }
    o.detail = "seeds=20 max_L=" + std::to_string(worst_L);
  });

  criterion("periodic_long_repeat", [&](Outcome& o) {
    constexpr std::size_t p = 16;
    auto m = periodic(p, 4);
    std::vector<std::size_t> grid;
    for (std::size_t n = 3 * p; n <= 10'000; ++n) grid.push_back(n);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto x = sample(m, grid.back(), seed);
      for (const auto& pt : maximal_repetition_profile(x, grid)) {
        if (pt.repetition + 2 * p < pt.n) {
          o.fail(fmt("seed %g n=%g L=%g", double(seed), double(pt.n), double(pt.repetition)));
        }
      }
    }
    o.detail = "n=48..10000 seeds=4";
  });

  criterion("power_law_fit_recovery", [&](Outcome& o) {
    const auto grid = geometric_grid(16, 1 << 20, std::pow(2.0, 0.25));
    double worst = 0.0;
    for (double A : {0.02498, 0.1, 0.4936, 1.0, 5.0}) {
      for (double alpha : {0.5, 1.0, 1.15, 2.0, 3.136}) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t n : grid) {
          pts.emplace_back(double(n), A * std::pow(std::log(double(n)), alpha));
        }
        const auto fit = fit_power_law_log(pts);
        const double ea = std::abs(fit.A - A) / A, eb = std::abs(fit.alpha - alpha) / alpha;
        worst = std::max({worst, ea, eb});
        if (ea > 1e-6 || eb > 1e-6) o.fail(fmt("A=%g alpha=%g: rel err %.3g", A, alpha, std::max(ea, eb)));
      }
    }
    o.detail = fmt("worst_rel_err=%.2g", worst);
  });

  criterion("fixture_near_log_regime", [&](Outcome& o) {
    const auto t0 = Clock::now();
    const std::string fixture = std::string(MAXREP_FIXTURE_DIR) + "/pseudorandom_1mb.txt";
    if (fs::file_size(fixture) < (1u << 20)) o.fail("fixture smaller than 1 MB");
    const auto [text, perm] = analyze_alphas(fixture, o);
    for (double a : {text, perm}) {
      if (!(a >= 0.8 && a <= 1.4)) o.fail(fmt("alpha %.4f outside [0.8, 1.4]", a));
    }
    const double secs = seconds_since(t0);
    if (secs >= 120.0) o.fail(fmt("runtime %.1f s >= 120 s", secs));
    o.detail = fmt("alpha_text=%.4f alpha_permutation=%.4f", text, perm);
  });

  const char* natural = std::getenv("MAXREP_NATURAL_CORPUS");
  if (natural == nullptr || !fs::exists(natural)) {
    skip("natural_text_exceeds_permutation", "set MAXREP_NATURAL_CORPUS to a text file of at least 5 MB");
  } else if (fs::file_size(natural) < 5u * 1024 * 1024) {
    skip("natural_text_exceeds_permutation", std::string(natural) + " is smaller than 5 MB");
  } else {
    criterion("natural_text_exceeds_permutation", [&](Outcome& o) {
      const auto [text, perm] = analyze_alphas(natural, o);
      if (!(text > perm)) o.fail(fmt("alpha_text %.4f <= alpha_permutation %.4f", text, perm));
      o.detail = fmt("alpha_text=%.4f alpha_permutation=%.4f", text, perm);
    });
  }

  criterion("rerun_determinism", [&](Outcome& o) {
    const auto coin = put("coin.json", R"({"kind":"iid","alphabet_size":2,"probabilities":[0.5,0.5]})");
    const auto hmm = put("hmm.json", R"({"kind":"hidden_markov","alphabet_size":3,
      "transition":[[0.8,0.15,0.05],[0.1,0.8,0.1],[0.2,0.2,0.6]],
      "emission":[[0.7,0.2,0.1],[0.1,0.8,0.1],[0.25,0.25,0.5]]})");
    const auto chain = put("chain.json", R"({"kind":"markov","alphabet_size":2,
      "transition":[[0.7,0.3],[0.3,0.7]]})");
    const std::string fixture = std::string(MAXREP_FIXTURE_DIR) + "/pseudorandom_1mb.txt";
    const auto curve = (scratch() / "curve.csv").string();
    if (cli({"analyze", fixture, "--grid-max", "65536", "--replicates", "4", "-o", curve}).code != kExitOk) {
      o.fail("could not produce a curve for fit");
    }
    const std::vector<std::vector<std::string>> runs{
        {"analyze", fixture, "--permute", "--seed", "9", "--replicates", "2", "--workers", "1"},
        {"fit", curve, "--workers", "1"},
        {"simulate", "--model", hmm, "-n", "5000", "--seed", "4"},
        {"entropy", "--model", hmm, "--functional", "shannon", "renyi", "tilde_cond_renyi", "--n-max", "4",
         "--replicas", "2000", "--seed", "8"},
        {"entropy", "--model", chain, "--functional", "min", "cond_renyi", "cond_min", "--gamma", "3"},
        {"bounds", "--model", hmm, "--replicas", "5000", "--seed", "12", "--growth-n-max", "4096",
         "--check", "recurrence_repetition", "trimmed_recurrence", "kac", "subword", "growth_T1", "growth_T2",
         "growth_T6"},
        {"bounds", "--model", coin, "--replicas", "5000", "--seed", "13", "--workers", "2"},
    };
    int i = 0;
    for (const auto& args : runs) {
      const auto first = (scratch() / ("first" + std::to_string(i))).string();
      const auto second = (scratch() / ("second" + std::to_string(i))).string();
      ++i;
      auto a = args;
      a.insert(a.end(), {"-o", first});
      const auto r1 = cli(a);
      if (r1.code != kExitOk) {
        o.fail(args[0] + " exit " + std::to_string(r1.code) + ": " + r1.err);
        continue;
      }
      const auto r2 = cli({args[0], "--config", first + ".config.json", "-o", second, "--workers", "4"});
      if (r2.code != kExitOk) {
        o.fail(args[0] + " rerun exit " + std::to_string(r2.code) + ": " + r2.err);
        continue;
      }
      if (slurp(first) != slurp(second)) o.fail(args[0] + " output differs on rerun");
      auto cfg = nlohmann::json::parse(slurp(second + ".config.json"));
      auto orig = nlohmann::json::parse(slurp(first + ".config.json"));
      cfg.erase("workers");
      orig.erase("workers");
      if (cfg != orig) o.fail(args[0] + " resolved config differs on rerun");
    }
    o.detail = "runs=" + std::to_string(runs.size()) + " rerun_workers=4";
  });

  std::printf("%s: %d criterion/criteria failed\n", g_failed == 0 ? "ALL PASS" : "FAILURES", g_failed);
  return g_failed == 0 ? 0 : 1;
}
