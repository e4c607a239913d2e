#include "maxrep/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "maxrep/errors.hpp"

namespace maxrep {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kStationaryTolerance = 1e-9;

void check_distribution(std::span<const double> p, const std::string& what) {
  if (p.empty()) throw ConfigError(what + ": empty probability vector");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw ConfigError(what + ": probabilities must be finite and nonnegative");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw ConfigError(what + ": probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

void check_square_stochastic(const Matrix& m, const std::string& what) {
  if (m.empty()) throw ConfigError(what + ": empty matrix");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size()) throw ConfigError(what + ": matrix is not square");
    check_distribution(m[i], what + " row " + std::to_string(i));
  }
}

std::vector<double> flatten(const Matrix& m) {
  std::vector<double> out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<double> resolve_stationary(const Matrix& transition,
                                       const std::optional<std::vector<double>>& initial,
                                       bool stationary, const std::string& what) {
  if (initial) {
    if (initial->size() != transition.size()) {
      throw ConfigError(what + ": initial distribution has wrong length");
    }
    check_distribution(*initial, what + " initial distribution");
  }
  if (stationary && initial) {
    const std::size_t s = transition.size();
    for (std::size_t j = 0; j < s; ++j) {
      double next = 0.0;
      for (std::size_t i = 0; i < s; ++i) next += (*initial)[i] * transition[i][j];
      if (std::abs(next - (*initial)[j]) > kStationaryTolerance) {
        throw ConfigError(what + ": initial distribution flagged stationary is not stationary");
      }
    }
    return *initial;
  }
  return stationary_distribution(transition);
}

// log P(block) with the state weights in `v` at time 0; v is left normalized.
double propagate(const HiddenChain& chain, std::vector<double>& v, std::span<const Symbol> w) {
  std::vector<double> next(chain.states());
  double log_prob = 0.0;
  for (Symbol y : w) {
    if (y >= chain.alphabet()) return -std::numeric_limits<double>::infinity();
    chain.advance(v, y, next);
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    if (!(total > 0.0)) return -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < next.size(); ++s) v[s] = next[s] / total;
    log_prob += std::log(total);
  }
  return log_prob;
}

std::int64_t single_support(std::span<const double> row) {
  std::int64_t found = -1;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] > 0.0) {
      if (found >= 0) return -1;
      found = static_cast<std::int64_t>(i);
    }
  }
  return found;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::iid: return "iid";
    case ModelKind::markov: return "markov";
    case ModelKind::hidden_markov: return "hidden_markov";
    case ModelKind::uniformly_dithered: return "uniformly_dithered";
    case ModelKind::periodic_random_phase: return "periodic_random_phase";
    case ModelKind::empirical_permutation: return "empirical_permutation";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  for (ModelKind k : {ModelKind::iid, ModelKind::markov, ModelKind::hidden_markov,
                      ModelKind::uniformly_dithered, ModelKind::periodic_random_phase,
                      ModelKind::empirical_permutation}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown model kind '" + name + "'");
}

std::vector<double> stationary_distribution(const Matrix& transition) {
  check_square_stochastic(transition, "transition");
  const std::size_t s = transition.size();
  std::vector<double> v(s, 1.0 / static_cast<double>(s)), next(s);
  for (int iter = 0; iter < 10'000'000; ++iter) {
    for (std::size_t j = 0; j < s; ++j) {
      double acc = 0.5 * v[j];
      for (std::size_t i = 0; i < s; ++i) acc += 0.5 * v[i] * transition[i][j];
      next[j] = acc;
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double change = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      next[j] /= total;
      change += std::abs(next[j] - v[j]);
    }
    v.swap(next);
    if (change < 1e-12) return v;
  }
  throw ConfigError("stationary distribution: power iteration did not converge");
}

// ---------------------------------------------------------------- HiddenChain

HiddenChain::HiddenChain(std::vector<double> transition, std::vector<double> emission,
                         std::vector<double> stationary, std::size_t states, Symbol alphabet)
    : states_(states),
      alphabet_(alphabet),
      transition_(std::move(transition)),
      emission_(std::move(emission)),
      stationary_(std::move(stationary)) {
  reversed_.assign(states_ * states_, 0.0);
  for (std::size_t s = 0; s < states_; ++s) {
    if (stationary_[s] > 0.0) {
      double total = 0.0;
      for (std::size_t t = 0; t < states_; ++t) {
        reversed_[s * states_ + t] = stationary_[t] * this->transition(t, s) / stationary_[s];
        total += reversed_[s * states_ + t];
      }
      for (std::size_t t = 0; t < states_; ++t) reversed_[s * states_ + t] /= total;
    } else {
      for (std::size_t t = 0; t < states_; ++t) reversed_[s * states_ + t] = this->transition(s, t);
    }
  }
  auto row = [](const std::vector<double>& m, std::size_t i, std::size_t width) {
    return std::span<const double>(m).subspan(i * width, width);
  };
  initial_ = Categorical(stationary_);
  for (std::size_t s = 0; s < states_; ++s) {
    next_.emplace_back(row(transition_, s, states_));
    previous_.emplace_back(row(reversed_, s, states_));
    emit_.emplace_back(row(emission_, s, alphabet_));
    fixed_next_.push_back(single_support(row(transition_, s, states_)));
    fixed_previous_.push_back(single_support(row(reversed_, s, states_)));
    fixed_symbol_.push_back(single_support(row(emission_, s, alphabet_)));
  }
}

void HiddenChain::advance(std::span<const double> v, Symbol y, std::span<double> out) const {
  for (std::size_t t = 0; t < states_; ++t) {
    const double e = emission(t, y);
    double acc = 0.0;
    if (e > 0.0) {
      for (std::size_t s = 0; s < states_; ++s) acc += v[s] * transition_[s * states_ + t];
    }
    out[t] = acc * e;
  }
}

std::size_t HiddenChain::draw_initial(Rng& rng) const {
  return states_ == 1 ? 0 : initial_(rng);
}

std::size_t HiddenChain::draw_next(Rng& rng, std::size_t state) const {
  const auto fixed = fixed_next_[state];
  return fixed >= 0 ? static_cast<std::size_t>(fixed) : next_[state](rng);
}

std::size_t HiddenChain::draw_previous(Rng& rng, std::size_t state) const {
  const auto fixed = fixed_previous_[state];
  return fixed >= 0 ? static_cast<std::size_t>(fixed) : previous_[state](rng);
}

Symbol HiddenChain::draw_symbol(Rng& rng, std::size_t state) const {
  const auto fixed = fixed_symbol_[state];
  return static_cast<Symbol>(fixed >= 0 ? static_cast<std::size_t>(fixed) : emit_[state](rng));
}

void HiddenChain::sample_path(Rng& rng, std::size_t n, std::vector<std::uint32_t>& states,
                              std::vector<Symbol>& symbols) const {
  states.resize(n);
  symbols.resize(n);
  std::size_t s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s = i == 0 ? draw_initial(rng) : draw_next(rng, s);
    states[i] = static_cast<std::uint32_t>(s);
    symbols[i] = draw_symbol(rng, s);
  }
}

bool HiddenChain::sample_states_given(Rng& rng, std::span<const Symbol> w,
                                      std::vector<std::uint32_t>& states) const {
  const std::size_t k = w.size();
  states.resize(k);
  if (k == 0) return true;
  std::vector<double> alpha(k * states_);
  std::vector<double> v(stationary_.begin(), stationary_.end());
  for (std::size_t t = 0; t < k; ++t) {
    if (w[t] >= alphabet_) return false;
    auto out = std::span<double>(alpha).subspan(t * states_, states_);
    advance(v, w[t], out);
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    if (!(total > 0.0)) return false;
    for (std::size_t s = 0; s < states_; ++s) {
      out[s] /= total;
      v[s] = out[s];
    }
  }
  std::vector<double> weights(states_);
  for (std::size_t t = k; t-- > 0;) {
    for (std::size_t s = 0; s < states_; ++s) {
      weights[s] = alpha[t * states_ + s];
      if (t + 1 < k) weights[s] *= transition(s, states[t + 1]);
    }
    states[t] = static_cast<std::uint32_t>(Categorical(weights)(rng));
  }
  return true;
}

// --------------------------------------------------------------- ProcessModel

ProcessModel::ProcessModel(ModelKind kind, Symbol alphabet_size, ModelParams params)
    : kind_(kind), alphabet_size_(alphabet_size), params_(std::move(params)) {
  if (alphabet_size_ == 0) throw ConfigError("alphabet_size must be positive");
  compile();
}

ProcessModel ProcessModel::iid(std::vector<double> probabilities) {
  const auto a = static_cast<Symbol>(probabilities.size());
  return ProcessModel(ModelKind::iid, a, IidParams{std::move(probabilities)});
}

ProcessModel ProcessModel::markov(Matrix transition, std::optional<std::vector<double>> initial,
                                  bool stationary) {
  const auto a = static_cast<Symbol>(transition.size());
  return ProcessModel(ModelKind::markov, a,
                      MarkovParams{std::move(transition), std::move(initial), stationary});
}

ProcessModel ProcessModel::hidden_markov(Matrix transition, Matrix emission,
                                         std::optional<std::vector<double>> initial,
                                         bool stationary) {
  const auto a = static_cast<Symbol>(emission.empty() ? 0 : emission.front().size());
  HiddenMarkovParams p;
  p.transition = std::move(transition);
  p.emission = std::move(emission);
  p.initial = std::move(initial);
  p.stationary = stationary;
  return ProcessModel(ModelKind::hidden_markov, a, std::move(p));
}

ProcessModel ProcessModel::hidden_markov(Matrix transition, std::vector<Symbol> emission_map,
                                         Symbol alphabet_size,
                                         std::optional<std::vector<double>> initial,
                                         bool stationary) {
  HiddenMarkovParams p;
  p.transition = std::move(transition);
  p.emission_map = std::move(emission_map);
  p.initial = std::move(initial);
  p.stationary = stationary;
  return ProcessModel(ModelKind::hidden_markov, alphabet_size, std::move(p));
}

ProcessModel ProcessModel::uniformly_dithered(const ProcessModel& base, std::vector<double> dither,
                                              double dither_bound) {
  DitheredParams p{std::make_shared<const ProcessModel>(base), std::move(dither), dither_bound};
  return ProcessModel(ModelKind::uniformly_dithered, base.alphabet_size(), std::move(p));
}

ProcessModel ProcessModel::periodic(std::vector<Symbol> period, Symbol alphabet_size) {
  return ProcessModel(ModelKind::periodic_random_phase, alphabet_size,
                      PeriodicParams{std::move(period)});
}

ProcessModel ProcessModel::empirical_permutation(std::vector<Symbol> source, Symbol alphabet_size) {
  return ProcessModel(ModelKind::empirical_permutation, alphabet_size,
                      PermutationParams{std::move(source)});
}

const HiddenChain& ProcessModel::chain() const {
  if (!chain_) {
    throw CapabilityError("model kind " + to_string(kind_) +
                          " has no exact probability representation");
  }
  return *chain_;
}

bool ProcessModel::state_is_past_measurable() const {
  return kind_ == ModelKind::iid || kind_ == ModelKind::markov ||
         kind_ == ModelKind::periodic_random_phase;
}

void ProcessModel::compile() {
  const Symbol a = alphabet_size_;
  switch (kind_) {
    case ModelKind::iid: {
      const auto& p = std::get<IidParams>(params_);
      check_distribution(p.probabilities, "iid probabilities");
      chain_ = std::make_shared<HiddenChain>(std::vector<double>{1.0}, p.probabilities,
                                             std::vector<double>{1.0}, 1, a);
      break;
    }
    case ModelKind::markov: {
      const auto& p = std::get<MarkovParams>(params_);
      check_square_stochastic(p.transition, "markov transition");
      std::vector<double> emission(std::size_t{a} * a, 0.0);
      for (Symbol s = 0; s < a; ++s) emission[std::size_t{s} * a + s] = 1.0;
      auto pi = resolve_stationary(p.transition, p.initial, p.stationary, "markov");
      chain_ = std::make_shared<HiddenChain>(flatten(p.transition), std::move(emission),
                                             std::move(pi), a, a);
      break;
    }
    case ModelKind::hidden_markov: {
      const auto& p = std::get<HiddenMarkovParams>(params_);
      check_square_stochastic(p.transition, "hidden_markov transition");
      const std::size_t states = p.transition.size();
      std::vector<double> emission(states * a, 0.0);
      if (p.emission.has_value() == p.emission_map.has_value()) {
        throw ConfigError("hidden_markov: give exactly one of emission matrix or emission map");
      }
      if (p.emission) {
        if (p.emission->size() != states) throw ConfigError("hidden_markov: emission rows != states");
        for (std::size_t s = 0; s < states; ++s) {
          if ((*p.emission)[s].size() != a) throw ConfigError("hidden_markov: ragged emission matrix");
          check_distribution((*p.emission)[s], "hidden_markov emission row " + std::to_string(s));
          std::copy((*p.emission)[s].begin(), (*p.emission)[s].end(),
                    emission.begin() + static_cast<std::ptrdiff_t>(s * a));
        }
      } else {
        if (p.emission_map->size() != states) throw ConfigError("hidden_markov: emission map size != states");
        for (std::size_t s = 0; s < states; ++s) {
          const Symbol y = (*p.emission_map)[s];
          if (y >= a) throw ConfigError("hidden_markov: emission map value outside alphabet");
          emission[s * a + y] = 1.0;
        }
      }
      auto pi = resolve_stationary(p.transition, p.initial, p.stationary, "hidden_markov");
      chain_ = std::make_shared<HiddenChain>(flatten(p.transition), std::move(emission),
                                             std::move(pi), states, a);
      break;
    }
    case ModelKind::uniformly_dithered: {
      const auto& p = std::get<DitheredParams>(params_);
      if (!p.base) throw ConfigError("uniformly_dithered: missing base model");
      if (!p.base->has_hidden_chain()) {
        throw ConfigError("uniformly_dithered: base model must have exact probabilities");
      }
      if (p.dither.size() != a) throw ConfigError("uniformly_dithered: dither size != alphabet size");
      check_distribution(p.dither, "uniformly_dithered dither");
      if (!(p.dither_bound < 1.0) || !(p.dither_bound > 0.0)) {
        throw ConfigError("uniformly_dithered: dither bound must lie in (0, 1)");
      }
      if (*std::max_element(p.dither.begin(), p.dither.end()) > p.dither_bound) {
        throw ConfigError("uniformly_dithered: dither mass exceeds declared bound");
      }
      const HiddenChain& base = p.base->chain();
      const std::size_t states = base.states();
      std::vector<double> transition(states * states), emission(states * a, 0.0);
      for (std::size_t s = 0; s < states; ++s) {
        for (std::size_t t = 0; t < states; ++t) transition[s * states + t] = base.transition(s, t);
        for (Symbol w = 0; w < a; ++w) {
          const double pw = base.emission(s, w);
          if (pw == 0.0) continue;
          for (Symbol z = 0; z < a; ++z) emission[s * a + (w + z) % a] += pw * p.dither[z];
        }
      }
      std::vector<double> pi(base.stationary().begin(), base.stationary().end());
      chain_ = std::make_shared<HiddenChain>(std::move(transition), std::move(emission),
                                             std::move(pi), states, a);
      break;
    }
    case ModelKind::periodic_random_phase: {
      const auto& p = std::get<PeriodicParams>(params_);
      const std::size_t period = p.period.size();
      if (period == 0) throw ConfigError("periodic: empty period");
      std::vector<double> transition(period * period, 0.0), emission(period * a, 0.0);
      for (std::size_t s = 0; s < period; ++s) {
        if (p.period[s] >= a) throw ConfigError("periodic: period symbol outside alphabet");
        transition[s * period + (s + 1) % period] = 1.0;
        emission[s * a + p.period[s]] = 1.0;
      }
      chain_ = std::make_shared<HiddenChain>(std::move(transition), std::move(emission),
                                             std::vector<double>(period, 1.0 / static_cast<double>(period)),
                                             period, a);
      break;
    }
    case ModelKind::empirical_permutation: {
      const auto& p = std::get<PermutationParams>(params_);
      Sequence(p.source, a);  // validates symbol range
      chain_.reset();
      break;
    }
  }
}

// ------------------------------------------------------------------ sampling

Sequence sample(const ProcessModel& model, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  if (model.kind() == ModelKind::empirical_permutation) {
    std::vector<Symbol> source = std::get<PermutationParams>(model.params()).source;
    if (n > source.size()) {
      throw InputError("empirical_permutation: requested " + std::to_string(n) +
                       " symbols from a source of " + std::to_string(source.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, source.size() - i));
      std::swap(source[i], source[j]);
    }
    source.resize(n);
    return Sequence(std::move(source), model.alphabet_size());
  }
  std::vector<std::uint32_t> states;
  std::vector<Symbol> symbols;
  model.chain().sample_path(rng, n, states, symbols);
  return Sequence(std::move(symbols), model.alphabet_size());
}

double filter_context(const HiddenChain& chain, std::span<const Symbol> context,
                      std::vector<double>& posterior) {
  posterior.assign(chain.stationary().begin(), chain.stationary().end());
  return propagate(chain, posterior, context);
}

double block_log_prob(const ProcessModel& model, std::span<const Symbol> w) {
  std::vector<double> v;
  return filter_context(model.chain(), w, v);
}

double conditional_block_log_prob(const ProcessModel& model, std::span<const Symbol> w,
                                  std::span<const Symbol> context) {
  const HiddenChain& chain = model.chain();
  std::vector<double> v;
  const double context_lp = filter_context(chain, context, v);
  if (!std::isfinite(context_lp)) {
    throw DomainError("conditional_block_log_prob: context has probability zero");
  }
  return propagate(chain, v, w);
}

// -------------------------------------------------------------- diagnostics

double hmm_finite_energy_constant(const ProcessModel& model) {
  const HiddenChain& chain = model.chain();
  double c = 0.0;
  for (std::size_t x = 0; x < chain.states(); ++x) {
    if (!(chain.stationary()[x] > 0.0)) continue;
    for (Symbol y = 0; y < chain.alphabet(); ++y) {
      double p = 0.0;
      for (std::size_t t = 0; t < chain.states(); ++t) p += chain.transition(x, t) * chain.emission(t, y);
      c = std::max(c, p);
    }
  }
  return std::min(c, 1.0);
}

ModelDiagnostics doeblin_check(const ProcessModel& model, std::uint32_t r) {
  if (r == 0) throw InputError("doeblin_check: r must be positive");
  const HiddenChain& chain = model.chain();
  const std::size_t s = chain.states();
  // Row s of T^r.
  std::vector<double> power(s * s, 0.0), next(s * s);
  for (std::size_t i = 0; i < s; ++i) power[i * s + i] = 1.0;
  for (std::uint32_t step = 0; step < r; ++step) {
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        double acc = 0.0;
        for (std::size_t m = 0; m < s; ++m) acc += power[i * s + m] * chain.transition(m, j);
        next[i * s + j] = acc;
      }
    }
    power.swap(next);
  }
  double d = 1.0, D = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    if (!(chain.stationary()[i] > 0.0)) continue;
    for (Symbol y = 0; y < chain.alphabet(); ++y) {
      double p = 0.0;
      for (std::size_t j = 0; j < s; ++j) p += power[i * s + j] * chain.emission(j, y);
      d = std::min(d, p);
      D = std::max(D, p);
    }
  }
  ModelDiagnostics out;
  out.doeblin_r = r;
  out.doeblin_d = d;
  out.doeblin_D = std::min(D, 1.0);
  if (D < 1.0) {
    out.finite_energy_c = std::pow(D, 1.0 / r);
    out.finite_energy_K = r == 1 ? 1.0 : 1.0 / D;
  }
  return out;
}

ModelDiagnostics diagnose(const ProcessModel& model) {
  ModelDiagnostics out = doeblin_check(model, 1);
  auto offer = [&](double c, double K) {
    if (!(c < 1.0)) return;
    if (!out.finite_energy_c || c < *out.finite_energy_c) {
      out.finite_energy_c = c;
      out.finite_energy_K = K;
    }
  };
  offer(hmm_finite_energy_constant(model), 1.0);
  if (model.kind() == ModelKind::uniformly_dithered) {
    const auto& dither = std::get<DitheredParams>(model.params()).dither;
    offer(*std::max_element(dither.begin(), dither.end()), 1.0);
  }
  return out;
}

}  // namespace maxrep
