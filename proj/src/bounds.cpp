#include "maxrep/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "maxrep/csv.hpp"
#include "maxrep/entropy.hpp"
#include "maxrep/errors.hpp"
#include "maxrep/strstat.hpp"
#include "maxrep/suffix_index.hpp"

namespace maxrep {

namespace {

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

// Mean and standard error, summed in index order.
template <class Range, class Fn>
Estimate estimate(const Range& items, Fn&& value) {
  Estimate e;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& it : items) {
    if (auto v = value(it)) {
      sum += *v;
      ++count;
    }
  }
  e.count = count;
  if (count == 0) {
    e.mean = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  e.mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (const auto& it : items) {
    if (auto v = value(it)) ss += (*v - e.mean) * (*v - e.mean);
  }
  if (count > 1) e.se = std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count));
  return e;
}

std::string word_label(std::span<const Symbol> w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(w[i]);
  }
  return out;
}

BoundReport make_report(const std::string& id, const ProcessModel& model, std::size_t n,
                        std::size_t k, const MonteCarloConfig& mc) {
  BoundReport r;
  r.bound_id = id;
  r.model = model.name.empty() ? to_string(model.kind()) : model.name;
  r.n = n;
  r.k = k;
  r.replicas = mc.replicas;
  r.seed = mc.seed;
  return r;
}

void finish(BoundReport& r) {
  r.verdict = judge(r.lhs, r.lhs_se, r.rhs, r.rhs_se, r.relation, r.tolerance_se);
}

void require_replicas(const MonteCarloConfig& mc) {
  if (mc.replicas < 2) throw InputError("Monte Carlo checks need at least 2 replicas");
  if (mc.max_shift == 0) throw InputError("max_shift must be positive");
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds-within-tolerance";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::less_equal: return "<=";
    case Relation::less: return "<";
    case Relation::equal: return "==";
  }
  return "?";
}

Verdict judge(double lhs, double lhs_se, double rhs, double rhs_se, Relation relation,
              double tolerance_se) {
  if (std::isnan(lhs) || std::isnan(rhs) || std::isnan(lhs_se) || std::isnan(rhs_se)) {
    return Verdict::inconclusive;
  }
  // Exact quantities still differ by rounding, hence the absolute floor.
  constexpr double kExactTolerance = 1e-9;
  const double slack = tolerance_se * (lhs_se + rhs_se);
  switch (relation) {
    case Relation::less_equal:
      return lhs - slack - kExactTolerance > rhs ? Verdict::violated : Verdict::holds;
    case Relation::less:
      if (slack > 0.0) return lhs - slack >= rhs ? Verdict::violated : Verdict::holds;
      return lhs < rhs ? Verdict::holds : Verdict::violated;
    case Relation::equal:
      if (std::isinf(lhs) || std::isinf(rhs)) return Verdict::inconclusive;
      return std::abs(lhs - rhs) > slack + kExactTolerance ? Verdict::violated : Verdict::holds;
  }
  return Verdict::inconclusive;
}

std::pair<std::uint64_t, bool> simulate_recurrence(const HiddenChain& chain, Rng& rng,
                                                   std::span<const Symbol> block,
                                                   std::size_t state_at_one,
                                                   std::uint64_t max_shift) {
  const std::size_t k = block.size();
  // past[j] holds X_{-j}; extended on demand from the reversed chain.
  std::vector<Symbol> past;
  std::size_t earliest_state = state_at_one;
  auto symbol_at = [&](std::int64_t t) -> Symbol {
    if (t >= 1) return block[static_cast<std::size_t>(t - 1)];
    const auto j = static_cast<std::size_t>(-t);
    while (past.size() <= j) {
      earliest_state = chain.draw_previous(rng, earliest_state);
      past.push_back(chain.draw_symbol(rng, earliest_state));
    }
    return past[j];
  };
  for (std::uint64_t i = 1; i <= max_shift; ++i) {
    bool match = true;
    // Compare from the oldest symbol so each shift extends the past by one.
    for (std::size_t j = 1; j <= k; ++j) {
      const std::int64_t t = static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i);
      if (symbol_at(t) != block[j - 1]) {
        match = false;
        break;
      }
    }
    if (match) return {i, false};
  }
  return {max_shift, true};
}

// ------------------------------------------------------------ Lemma 1

std::vector<BoundReport> check_recurrence_repetition(const ProcessModel& model, std::size_t n,
                                                     std::size_t k,
                                                     const std::vector<double>& gammas,
                                                     const MonteCarloConfig& mc) {
  if (k == 0 || k >= n) throw InputError("recurrence/repetition check needs 1 <= k < n");
  for (double g : gammas) {
    if (!(g > 1.0)) throw InputError("recurrence/repetition check needs gamma > 1");
  }
  require_replicas(mc);
  const HiddenChain& chain = model.chain();

  struct Sample {
    bool short_repeat = false;  // L(X_1^n) < k
    std::uint64_t recurrence = 0;
    bool truncated = false;
  };
  auto samples = run_replicas<Sample>(mc.replicas, mc.seed, mc.workers, [&](std::size_t, Rng& rng) {
    std::vector<std::uint32_t> states;
    std::vector<Symbol> symbols;
    chain.sample_path(rng, n, states, symbols);
    Sample s;
    s.short_repeat = maximal_repetition(symbols) < k;
    auto [value, truncated] = simulate_recurrence(
        chain, rng, std::span<const Symbol>(symbols).first(k), states[0], mc.max_shift);
    s.recurrence = value;
    s.truncated = truncated;
    return s;
  });

  std::size_t truncated = 0;
  for (const auto& s : samples) truncated += s.truncated;
  const double log_span = std::log(static_cast<double>(n - k + 1));
  std::vector<BoundReport> out;

  auto p_short = estimate(samples, [](const Sample& s) { return std::optional<double>(s.short_repeat); });
  auto log_r = estimate(samples, [](const Sample& s) {
    return std::optional<double>(std::log(static_cast<double>(s.recurrence)));
  });
  BoundReport a = make_report("max_rep_recurrence", model, n, k, mc);
  a.lhs = p_short.mean;
  a.lhs_se = p_short.se;
  a.rhs = log_r.mean / log_span;
  a.rhs_se = log_r.se / log_span;
  a.truncated = truncated;
  finish(a);
  out.push_back(a);

  for (double g : gammas) {
    auto tail = estimate(samples, [&](const Sample& s) {
      return std::optional<double>(s.truncated ? 0.0 : std::pow(static_cast<double>(s.recurrence), 1.0 - g));
    });
    const double factor = std::pow(static_cast<double>(n - k + 1), g);
    BoundReport b = make_report("max_rep_recurrence_ii", model, n, k, mc);
    b.gamma = g;
    b.lhs = 1.0 - p_short.mean;
    b.lhs_se = p_short.se;
    b.rhs = factor * tail.mean;
    b.rhs_se = factor * tail.se;
    b.truncated = truncated;
    finish(b);
    out.push_back(b);
  }
  return out;
}

// ------------------------------------------------------------ Lemma 2

std::vector<BoundReport> check_trimmed_recurrence(const ProcessModel& model, std::size_t k,
                                                  const std::vector<double>& Cs,
                                                  const MonteCarloConfig& mc) {
  if (k == 0) throw InputError("trimmed recurrence check needs k >= 1");
  for (double c : Cs) {
    if (!(c > 0.0)) throw InputError("trimmed recurrence check needs C > 0");
  }
  require_replicas(mc);
  const HiddenChain& chain = model.chain();
  const std::uint64_t cap = block_space_size(model.alphabet_size(), k);
  constexpr std::uint64_t kWindowBudget = std::uint64_t{1} << 20;
  if (cap > kWindowBudget) {
    throw CapabilityError("trimmed recurrence: N(k) = |alphabet|^k exceeds the window budget");
  }
  const std::size_t context = static_cast<std::size_t>(cap) + 1;  // X_{-N(k)}^0

  struct Sample {
    std::uint64_t trimmed = 0;
    double log_cond = 0.0;  // log P(X_1^k | X_{-N(k)}^0)
  };
  auto samples = run_replicas<Sample>(mc.replicas, mc.seed, mc.workers, [&](std::size_t, Rng& rng) {
    std::vector<std::uint32_t> states;
    std::vector<Symbol> symbols;
    chain.sample_path(rng, context + k, states, symbols);
    Sample s;
    s.trimmed = waiting_time(symbols, context, std::span<const Symbol>(symbols).subspan(context, k), cap).value;
    std::vector<double> posterior;
    filter_context(chain, std::span<const Symbol>(symbols).first(context), posterior);
    double lp = 0.0;
    std::vector<double> next(chain.states());
    for (std::size_t i = 0; i < k; ++i) {
      chain.advance(posterior, symbols[context + i], next);
      const double total = std::accumulate(next.begin(), next.end(), 0.0);
      for (std::size_t t = 0; t < next.size(); ++t) posterior[t] = next[t] / total;
      lp += std::log(total);
    }
    s.log_cond = lp;
    return s;
  });

  std::vector<BoundReport> out;
  for (double c : Cs) {
    auto hit = estimate(samples, [&](const Sample& s) {
      return std::optional<double>(std::log(static_cast<double>(s.trimmed)) + s.log_cond <= std::log(c));
    });
    BoundReport r = make_report("prob_recurrence", model, 0, k, mc);
    r.C = c;
    r.lhs = hit.mean;
    r.lhs_se = hit.se;
    r.rhs = c * (1.0 + static_cast<double>(k) * std::log(static_cast<double>(model.alphabet_size())));
    finish(r);
    out.push_back(r);
  }
  return out;
}

// ------------------------------------------------------------ Kac / Lemma 3

std::vector<BoundReport> check_kac(const ProcessModel& model, std::size_t k,
                                   const std::vector<std::vector<Symbol>>& words,
                                   const std::vector<double>& tail_Cs,
                                   const MonteCarloConfig& mc) {
  if (k == 0) throw InputError("Kac check needs k >= 1");
  require_replicas(mc);
  const HiddenChain& chain = model.chain();

  std::vector<std::vector<Symbol>> targets = words;
  if (targets.empty()) {
    const std::uint64_t space = block_space_size(model.alphabet_size(), k);
    if (space > kEnumerationBudget) throw CapabilityError("Kac check: too many words to enumerate");
    for (std::uint64_t code = 0; code < space; ++code) {
      std::vector<Symbol> w(k);
      std::uint64_t c = code;
      for (std::size_t i = k; i-- > 0;) {
        w[i] = static_cast<Symbol>(c % model.alphabet_size());
        c /= model.alphabet_size();
      }
      if (std::isfinite(block_log_prob(model, w))) targets.push_back(std::move(w));
    }
  }

  std::vector<BoundReport> out;
  for (std::size_t wi = 0; wi < targets.size(); ++wi) {
    const auto& w = targets[wi];
    if (w.size() != k) throw InputError("Kac check: word length differs from k");
    const double lp = block_log_prob(model, w);
    if (!std::isfinite(lp)) throw DomainError("Kac check: word " + word_label(w) + " has probability zero");
    MonteCarloConfig word_mc = mc;
    word_mc.seed = derive_seed(mc.seed, 0x4b4143ULL + wi);

    struct Sample {
      std::uint64_t recurrence = 0;
      bool truncated = false;
    };
    auto samples = run_replicas<Sample>(mc.replicas, word_mc.seed, mc.workers, [&](std::size_t, Rng& rng) {
      std::vector<std::uint32_t> states;
      chain.sample_states_given(rng, w, states);
      auto [value, truncated] = simulate_recurrence(chain, rng, w, states[0], mc.max_shift);
      return Sample{value, truncated};
    });
    auto mean = estimate(samples, [&](const Sample& s) -> std::optional<double> {
      if (s.truncated) return std::nullopt;
      return static_cast<double>(s.recurrence) * mc.kac_fault_factor;
    });
    BoundReport r = make_report("kac", model, 0, k, word_mc);
    r.word = word_label(w);
    r.relation = Relation::equal;
    r.tolerance_se = 4.0;
    r.lhs = mean.mean;
    r.lhs_se = mean.se;
    r.rhs = std::exp(-lp);
    r.excluded = mc.replicas - mean.count;
    r.truncated = r.excluded;
    finish(r);
    out.push_back(r);
  }

  if (!tail_Cs.empty()) {
    for (double c : tail_Cs) {
      if (!(c > 0.0)) throw InputError("Kac tail check needs C > 0");
    }
    struct Sample {
      double log_scaled = 0.0;  // log(R_k P(X_1^k))
      bool truncated = false;
    };
    const std::uint64_t tail_seed = derive_seed(mc.seed, 0x5441494cULL);
    auto samples = run_replicas<Sample>(mc.replicas, tail_seed, mc.workers, [&](std::size_t, Rng& rng) {
      std::vector<std::uint32_t> states;
      std::vector<Symbol> symbols;
      chain.sample_path(rng, k, states, symbols);
      auto [value, truncated] = simulate_recurrence(chain, rng, symbols, states[0], mc.max_shift);
      return Sample{std::log(static_cast<double>(value)) + block_log_prob(model, symbols), truncated};
    });
    std::size_t truncated = 0;
    for (const auto& s : samples) truncated += s.truncated;
    for (double c : tail_Cs) {
      auto hit = estimate(samples, [&](const Sample& s) {
        return std::optional<double>(s.truncated || s.log_scaled >= std::log(c));
      });
      MonteCarloConfig tail_mc = mc;
      tail_mc.seed = tail_seed;
      BoundReport r = make_report("prob_recurrence_ii", model, 0, k, tail_mc);
      r.C = c;
      r.lhs = hit.mean;
      r.lhs_se = hit.se;
      r.rhs = 1.0 / c;
      r.truncated = truncated;
      finish(r);
      out.push_back(r);
    }
  }
  return out;
}

// ------------------------------------------------------------ Lemmas 4 and 5

std::vector<BoundReport> check_subword_bounds(const ProcessModel& model, std::size_t n,
                                              std::size_t k, const std::vector<double>& ms,
                                              const MonteCarloConfig& mc) {
  if (k == 0 || k >= n) throw InputError("subword check needs 1 <= k < n");
  for (double m : ms) {
    if (!(m >= 1.0)) throw InputError("subword check needs m >= 1");
  }
  require_replicas(mc);
  const HiddenChain& chain = model.chain();
  const double shannon = renyi_block_entropy(model, k, 1.0).value;

  struct Sample {
    std::size_t complexity = 0;
    bool short_repeat = false;
  };
  auto samples = run_replicas<Sample>(mc.replicas, mc.seed, mc.workers, [&](std::size_t, Rng& rng) {
    std::vector<std::uint32_t> states;
    std::vector<Symbol> symbols;
    chain.sample_path(rng, n, states, symbols);
    SuffixIndex index(symbols);
    return Sample{index.distinct_blocks(k), index.max_lcp() < k};
  });

  const double blocks = static_cast<double>(n - k + 1);
  auto p_short = estimate(samples, [](const Sample& s) { return std::optional<double>(s.short_repeat); });
  auto f = estimate(samples, [](const Sample& s) { return std::optional<double>(static_cast<double>(s.complexity)); });

  std::vector<BoundReport> out;
  BoundReport a = make_report("max_rep_subword", model, n, k, mc);
  a.lhs = p_short.mean;
  a.lhs_se = p_short.se;
  a.rhs = f.mean / blocks;
  a.rhs_se = f.se / blocks;
  finish(a);
  out.push_back(a);

  BoundReport b = make_report("max_rep_subword_ii", model, n, k, mc);
  b.lhs = 1.0 - p_short.mean;
  b.lhs_se = p_short.se;
  b.rhs = blocks - f.mean;
  b.rhs_se = f.se;
  finish(b);
  out.push_back(b);

  for (double m : ms) {
    BoundReport c = make_report("max_rep_entropy", model, n, k, mc);
    c.m = m;
    c.lhs = f.mean / blocks;
    c.lhs_se = f.se / blocks;
    c.rhs = 1.0 / m + std::exp(m * shannon) / blocks;
    finish(c);
    out.push_back(c);
  }
  return out;
}

// ------------------------------------------------------------ growth theorems

std::string to_string(GrowthTheorem t) {
  switch (t) {
    case GrowthTheorem::T1: return "T1";
    case GrowthTheorem::T2: return "T2";
    case GrowthTheorem::T6: return "T6";
    case GrowthTheorem::T7: return "T7";
  }
  return "?";
}

GrowthTheorem growth_theorem_from_string(const std::string& name) {
  for (auto t : {GrowthTheorem::T1, GrowthTheorem::T2, GrowthTheorem::T6, GrowthTheorem::T7}) {
    if (to_string(t) == name) return t;
  }
  throw InputError("unknown growth theorem '" + name + "'");
}

double positive_block_count(const ProcessModel& model, std::size_t k) {
  switch (model.kind()) {
    case ModelKind::iid: {
      const auto& p = std::get<IidParams>(model.params()).probabilities;
      const auto support = std::count_if(p.begin(), p.end(), [](double x) { return x > 0.0; });
      return std::pow(static_cast<double>(support), static_cast<double>(k));
    }
    case ModelKind::periodic_random_phase: {
      // Distinct length-k windows of the cyclic period; constant once k >= period.
      const auto& period = std::get<PeriodicParams>(model.params()).period;
      const std::size_t p = period.size();
      const std::size_t len = std::min(k, p);
      std::set<std::vector<Symbol>> windows;
      for (std::size_t s = 0; s < p; ++s) {
        std::vector<Symbol> w(len);
        for (std::size_t i = 0; i < len; ++i) w[i] = period[(s + i) % p];
        windows.insert(std::move(w));
      }
      return static_cast<double>(windows.size());
    }
    default:
      return std::exp(renyi_block_entropy(model, k, 0.0).value);
  }
}

std::vector<BoundReport> check_growth_theorems(const ProcessModel& model, GrowthTheorem theorem,
                                               const std::vector<std::size_t>& n_grid,
                                               std::uint64_t seed,
                                               const GrowthOptions& options) {
  if (n_grid.empty()) throw InputError("growth check needs a nonempty grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
      std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end()) {
    throw InputError("growth grid must be strictly increasing");
  }
  const HiddenChain& chain = model.chain();
  (void)chain;

  // Certify the entropy hypothesis before sampling.
  double envelope_A = 0.0;
  std::string note;
  switch (theorem) {
    case GrowthTheorem::T1:
      note = "envelope: largest k with exp(H_0(k)) < n-k+1";
      break;
    case GrowthTheorem::T2: {
      const double B = conditional_min_entropy(model, 1).value;
      if (!(B > 0.0)) throw CapabilityError("T2: conditional min-entropy rate not certified positive");
      envelope_A = 3.0 / B;
      note = "B=" + format_number(B) + " A=3/B";
      break;
    }
    case GrowthTheorem::T6:
      if (!(options.alpha < 1.0) || !(options.alpha > 0.0)) {
        throw InputError("T6 needs 0 < alpha < 1 (beta = 1 from H(k) <= H(1) k)");
      }
      note = "beta=1 B=H(1)=" + format_number(renyi_block_entropy(model, 1, 1.0).value);
      break;
    case GrowthTheorem::T7: {
      if (model.kind() != ModelKind::iid && model.kind() != ModelKind::markov) {
        throw CapabilityError("T7: conditional Renyi hypothesis is certified only for iid and markov models");
      }
      const double g = options.gamma;
      if (!(g > 1.0) || std::isinf(g)) throw InputError("T7 needs 1 < gamma < infinity");
      double worst = 0.0;
      const HiddenChain& c = model.chain();
      for (std::size_t s = 0; s < c.states(); ++s) {
        if (!(c.stationary()[s] > 0.0)) continue;
        double row = 0.0;
        for (Symbol y = 0; y < c.alphabet(); ++y) {
          double p = 0.0;
          for (std::size_t t = 0; t < c.states(); ++t) p += c.transition(s, t) * c.emission(t, y);
          if (p > 0.0) row += std::pow(p, g);
        }
        worst = std::max(worst, row);
      }
      const double B = -std::log(worst) / (g - 1.0);
      if (!(B > 0.0)) throw CapabilityError("T7: conditional Renyi entropy rate not certified positive");
      envelope_A = g * (g + 1.0) / (g - 1.0) / B;
      note = "B=" + format_number(B) + " A=gamma(gamma+1)/(gamma-1)/B";
      break;
    }
  }

  const Sequence trajectory = sample(model, n_grid.back(), seed);
  const auto profile = maximal_repetition_profile(trajectory, n_grid);

  std::vector<BoundReport> out;
  MonteCarloConfig meta;
  meta.replicas = 1;
  meta.seed = seed;
  for (const auto& point : profile) {
    BoundReport r = make_report("growth_" + to_string(theorem), model, point.n, 0, meta);
    r.note = note;
    const double L = static_cast<double>(point.repetition);
    const double log_n = std::log(static_cast<double>(point.n));
    switch (theorem) {
      case GrowthTheorem::T1: {
        std::size_t best = 0;
        for (std::size_t k = 1; k < point.n; ++k) {
          if (positive_block_count(model, k) < static_cast<double>(point.n - k + 1)) {
            best = k;
          } else {
            break;
          }
        }
        r.k = best;
        r.lhs = static_cast<double>(best);
        r.rhs = L;
        r.relation = Relation::less_equal;
        break;
      }
      case GrowthTheorem::T2:
      case GrowthTheorem::T7:
        r.lhs = L;
        r.rhs = envelope_A * log_n;
        r.relation = Relation::less;
        break;
      case GrowthTheorem::T6:
        r.lhs = std::pow(log_n, options.alpha);
        r.rhs = L;
        r.relation = Relation::less;
        break;
    }
    r.tolerance_se = 0.0;
    if (point.n < options.burn_in) {
      r.verdict = Verdict::inconclusive;
      r.note += "; below burn-in " + std::to_string(options.burn_in);
    } else {
      finish(r);
    }
    out.push_back(r);
  }
  return out;
}

// ------------------------------------------------------------ suite

std::string to_string(CheckId id) {
  switch (id) {
    case CheckId::recurrence_repetition: return "recurrence_repetition";
    case CheckId::trimmed_recurrence: return "trimmed_recurrence";
    case CheckId::kac: return "kac";
    case CheckId::subword: return "subword";
    case CheckId::growth_T1: return "growth_T1";
    case CheckId::growth_T2: return "growth_T2";
    case CheckId::growth_T6: return "growth_T6";
    case CheckId::growth_T7: return "growth_T7";
  }
  return "?";
}

std::vector<CheckId> all_checks() {
  return {CheckId::recurrence_repetition, CheckId::trimmed_recurrence, CheckId::kac,
          CheckId::subword, CheckId::growth_T1, CheckId::growth_T2,
          CheckId::growth_T6, CheckId::growth_T7};
}

CheckId check_id_from_string(const std::string& name) {
  for (auto id : all_checks()) {
    if (to_string(id) == name) return id;
  }
  throw InputError("unknown check '" + name + "'");
}

bool SuiteResult::any_violated() const {
  return std::any_of(reports.begin(), reports.end(),
                     [](const BoundReport& r) { return r.verdict == Verdict::violated; });
}

SuiteResult run_bound_suite(const ProcessModel& model, const std::vector<CheckId>& checks,
                            const BoundsGrid& grid, const MonteCarloConfig& mc,
                            const std::vector<std::size_t>& growth_grid,
                            const GrowthOptions& growth) {
  SuiteResult result;
  auto append = [&](std::vector<BoundReport> rows) {
    result.reports.insert(result.reports.end(), rows.begin(), rows.end());
  };
  for (std::size_t ci = 0; ci < checks.size(); ++ci) {
    const CheckId id = checks[ci];
    MonteCarloConfig sub = mc;
    sub.seed = derive_seed(mc.seed, 1000 + static_cast<std::uint64_t>(id));
    try {
      switch (id) {
        case CheckId::recurrence_repetition:
          for (std::size_t i = 0; i < grid.recurrence_nk.size(); ++i) {
            MonteCarloConfig point = sub;
            point.seed = derive_seed(sub.seed, i);
            append(check_recurrence_repetition(model, grid.recurrence_nk[i].first,
                                               grid.recurrence_nk[i].second, grid.gammas, point));
          }
          break;
        case CheckId::trimmed_recurrence:
          for (std::size_t i = 0; i < grid.trimmed_k.size(); ++i) {
            MonteCarloConfig point = sub;
            point.seed = derive_seed(sub.seed, i);
            append(check_trimmed_recurrence(model, grid.trimmed_k[i], grid.Cs, point));
          }
          break;
        case CheckId::kac:
          append(check_kac(model, grid.kac_k, {}, grid.tail_Cs, sub));
          break;
        case CheckId::subword:
          for (std::size_t i = 0; i < grid.subword_nk.size(); ++i) {
            MonteCarloConfig point = sub;
            point.seed = derive_seed(sub.seed, i);
            append(check_subword_bounds(model, grid.subword_nk[i].first, grid.subword_nk[i].second,
                                        grid.ms, point));
          }
          break;
        case CheckId::growth_T1:
          append(check_growth_theorems(model, GrowthTheorem::T1, growth_grid, sub.seed, growth));
          break;
        case CheckId::growth_T2:
          append(check_growth_theorems(model, GrowthTheorem::T2, growth_grid, sub.seed, growth));
          break;
        case CheckId::growth_T6:
          append(check_growth_theorems(model, GrowthTheorem::T6, growth_grid, sub.seed, growth));
          break;
        case CheckId::growth_T7:
          append(check_growth_theorems(model, GrowthTheorem::T7, growth_grid, sub.seed, growth));
          break;
      }
    } catch (const CapabilityError& e) {
      result.capability_errors.push_back(to_string(id) + ": " + e.what());
    }
  }
  return result;
}

nlohmann::json report_to_json(const BoundReport& r) {
  nlohmann::json j;
  j["bound_id"] = r.bound_id;
  j["model"] = r.model;
  j["n"] = r.n;
  j["k"] = r.k;
  j["gamma"] = r.gamma ? nlohmann::json(*r.gamma) : nlohmann::json();
  j["m"] = r.m ? nlohmann::json(*r.m) : nlohmann::json();
  j["C"] = r.C ? nlohmann::json(*r.C) : nlohmann::json();
  j["word"] = r.word ? nlohmann::json(*r.word) : nlohmann::json();
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_number(v)); };
  j["lhs_estimate"] = num(r.lhs);
  j["lhs_se"] = num(r.lhs_se);
  j["rhs_value"] = num(r.rhs);
  j["rhs_se"] = num(r.rhs_se);
  j["relation"] = to_string(r.relation);
  j["tolerance_se"] = r.tolerance_se;
  j["replicas"] = r.replicas;
  j["seed"] = r.seed;
  j["truncated"] = r.truncated;
  j["excluded"] = r.excluded;
  j["verdict"] = to_string(r.verdict);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string reports_to_csv(const std::vector<BoundReport>& reports) {
  std::ostringstream out;
  out << "bound_id,model,n,k,gamma,m,C,word,lhs,lhs_se,rhs,rhs_se,relation,tolerance_se,"
         "replicas,seed,truncated,excluded,verdict\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& r : reports) {
    out << r.bound_id << ',' << r.model << ',' << r.n << ',' << r.k << ',' << opt(r.gamma) << ','
        << opt(r.m) << ',' << opt(r.C) << ',' << r.word.value_or("") << ','
        << format_number(r.lhs) << ',' << format_number(r.lhs_se) << ',' << format_number(r.rhs)
        << ',' << format_number(r.rhs_se) << ',' << to_string(r.relation) << ','
        << format_number(r.tolerance_se) << ',' << r.replicas << ',' << r.seed << ','
        << r.truncated << ',' << r.excluded << ',' << to_string(r.verdict) << '\n';
  }
  return out.str();
}

}  // namespace maxrep
