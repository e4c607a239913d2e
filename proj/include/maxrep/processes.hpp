#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "maxrep/random.hpp"
#include "maxrep/sequence.hpp"

namespace maxrep {

enum class ModelKind {
  iid,
  markov,
  hidden_markov,
  uniformly_dithered,
  periodic_random_phase,
  empirical_permutation,
};

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Rows of a row-stochastic matrix.
using Matrix = std::vector<std::vector<double>>;

class ProcessModel;

struct IidParams {
  std::vector<double> probabilities;
};

struct MarkovParams {
  Matrix transition;
  std::optional<std::vector<double>> initial;
  bool stationary = false;  // when set, `initial` is checked for stationarity
};

struct HiddenMarkovParams {
  Matrix transition;
  // Exactly one of the two emission descriptions is set.
  std::optional<Matrix> emission;
  std::optional<std::vector<Symbol>> emission_map;
  std::optional<std::vector<double>> initial;
  bool stationary = false;
};

// X_i = W_i + Z_i (mod alphabet_size) with Z_i IID from `dither`.
struct DitheredParams {
  std::shared_ptr<const ProcessModel> base;
  std::vector<double> dither;
  double dither_bound = 1.0;  // declared c with max_a P(Z = a) <= c < 1
};

struct PeriodicParams {
  std::vector<Symbol> period;
};

struct PermutationParams {
  std::vector<Symbol> source;
};

using ModelParams = std::variant<IidParams, MarkovParams, HiddenMarkovParams,
                                 DitheredParams, PeriodicParams, PermutationParams>;

// Finite-state representation shared by every stationary model kind: a Markov
// chain over hidden states with per-state emission distributions, started from
// its stationary law.
class HiddenChain {
 public:
  HiddenChain(std::vector<double> transition, std::vector<double> emission,
              std::vector<double> stationary, std::size_t states, Symbol alphabet);

  std::size_t states() const { return states_; }
  Symbol alphabet() const { return alphabet_; }
  double transition(std::size_t from, std::size_t to) const { return transition_[from * states_ + to]; }
  double emission(std::size_t state, Symbol y) const { return emission_[state * alphabet_ + y]; }
  std::span<const double> stationary() const { return stationary_; }
  // Time-reversed kernel pi(t) T(t, s) / pi(s).
  double reversed(std::size_t from, std::size_t to) const { return reversed_[from * states_ + to]; }

  // Propagates a row vector of state weights at time t to time t + 1 jointly
  // with emitting y at t + 1: out(s') = sum_s v(s) T(s, s') E(s', y).
  void advance(std::span<const double> v, Symbol y, std::span<double> out) const;

  std::size_t draw_initial(Rng& rng) const;
  std::size_t draw_next(Rng& rng, std::size_t state) const;
  std::size_t draw_previous(Rng& rng, std::size_t state) const;
  Symbol draw_symbol(Rng& rng, std::size_t state) const;

  // Stationary forward path of length n.
  void sample_path(Rng& rng, std::size_t n, std::vector<std::uint32_t>& states,
                   std::vector<Symbol>& symbols) const;

  // Hidden states at times 1..k drawn from their law given X_1^k = w (forward
  // filtering, backward sampling). Returns false when P(w) = 0.
  bool sample_states_given(Rng& rng, std::span<const Symbol> w,
                           std::vector<std::uint32_t>& states) const;

 private:
  std::size_t states_;
  Symbol alphabet_;
  std::vector<double> transition_, emission_, stationary_, reversed_;
  std::vector<Categorical> next_, previous_, emit_;
  Categorical initial_;
  std::vector<std::int64_t> fixed_next_, fixed_previous_, fixed_symbol_;
};

class ProcessModel {
 public:
  static ProcessModel iid(std::vector<double> probabilities);
  static ProcessModel markov(Matrix transition,
                             std::optional<std::vector<double>> initial = std::nullopt,
                             bool stationary = false);
  static ProcessModel hidden_markov(Matrix transition, Matrix emission,
                                    std::optional<std::vector<double>> initial = std::nullopt,
                                    bool stationary = false);
  // Deterministic emission Y_i = f(X_i).
  static ProcessModel hidden_markov(Matrix transition, std::vector<Symbol> emission_map,
                                    Symbol alphabet_size,
                                    std::optional<std::vector<double>> initial = std::nullopt,
                                    bool stationary = false);
  static ProcessModel uniformly_dithered(const ProcessModel& base, std::vector<double> dither,
                                         double dither_bound);
  static ProcessModel periodic(std::vector<Symbol> period, Symbol alphabet_size);
  static ProcessModel empirical_permutation(std::vector<Symbol> source, Symbol alphabet_size);

  ModelKind kind() const { return kind_; }
  Symbol alphabet_size() const { return alphabet_size_; }
  const ModelParams& params() const { return params_; }

  // Free-form label and default seed carried through model files.
  std::string name;
  std::optional<std::uint64_t> seed;

  bool has_hidden_chain() const { return chain_ != nullptr; }
  // Throws CapabilityError for empirical_permutation.
  const HiddenChain& chain() const;

  // True when the law of the future given the infinite past reduces to the
  // hidden state at time 0 (iid, markov, periodic). For hidden_markov and
  // uniformly_dithered the hidden state is finer than the observable past.
  bool state_is_past_measurable() const;

 private:
  ProcessModel(ModelKind kind, Symbol alphabet_size, ModelParams params);
  void compile();

  ModelKind kind_;
  Symbol alphabet_size_;
  ModelParams params_;
  std::shared_ptr<const HiddenChain> chain_;
};

// Deterministic in (model, n, seed). Stationary kinds start from the
// stationary law; empirical_permutation returns the first n symbols of a
// seeded shuffle of its source (n must not exceed the source length).
Sequence sample(const ProcessModel& model, std::size_t n, std::uint64_t seed);

// Natural log of P(X_1^n = w) under the stationary law; -infinity for
// impossible blocks. CapabilityError for empirical_permutation.
double block_log_prob(const ProcessModel& model, std::span<const Symbol> w);
inline double block_log_prob(const ProcessModel& model, const Sequence& w) {
  return block_log_prob(model, w.symbols());
}

// log P(X_{m+1}^{m+n} = w | X_1^m = context). DomainError when the context
// has probability zero.
double conditional_block_log_prob(const ProcessModel& model, std::span<const Symbol> w,
                                  std::span<const Symbol> context);
inline double conditional_block_log_prob(const ProcessModel& model, const Sequence& w,
                                         const Sequence& context) {
  return conditional_block_log_prob(model, w.symbols(), context.symbols());
}

// Filters the hidden state through `context` starting from the stationary
// law. Writes the normalized state distribution after the context into
// `posterior` and returns log P(context).
double filter_context(const HiddenChain& chain, std::span<const Symbol> context,
                      std::vector<double>& posterior);

struct ModelDiagnostics {
  std::optional<double> finite_energy_c;
  std::optional<double> finite_energy_K;
  std::optional<double> doeblin_d;
  std::optional<double> doeblin_D;
  std::optional<std::uint32_t> doeblin_r;

  bool doeblin_lower_holds() const { return doeblin_d && *doeblin_d > 0.0; }
  bool doeblin_upper_holds() const { return doeblin_D && *doeblin_D < 1.0; }
  bool finite_energy() const { return finite_energy_c && *finite_energy_c < 1.0; }
};

// max over hidden states x with positive stationary mass and symbols y of
// P(Y_i = y | X_{i-1} = x) = sum_x' T(x, x') E(x', y). Below one certifies
// finite energy with K = 1.
double hmm_finite_energy_constant(const ProcessModel& model);

// d and D are the min and max over hidden states s (positive stationary mass)
// and symbols y of P(X_r = y | S_0 = s). For hidden_markov the hidden state
// refines the observable past, so d and D are valid but possibly loose.
// When D < 1 the finite-energy fields hold c = D^(1/r), K = 1/D.
ModelDiagnostics doeblin_check(const ProcessModel& model, std::uint32_t r);

// All certificates available for the model kind; the smallest c wins.
ModelDiagnostics diagnose(const ProcessModel& model);

// Stationary distribution of a row-stochastic matrix by power iteration on the
// lazy chain (I + T) / 2, stopping at L1 change below 1e-12.
std::vector<double> stationary_distribution(const Matrix& transition);

}  // namespace maxrep
