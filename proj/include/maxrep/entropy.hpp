#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "maxrep/processes.hpp"
#include "maxrep/sequence.hpp"

namespace maxrep {

// All entropies are in nats.
inline constexpr double kInfiniteOrder = std::numeric_limits<double>::infinity();

// Exact enumeration stops after this many positive-probability blocks.
inline constexpr std::uint64_t kEnumerationBudget = std::uint64_t{1} << 24;

enum class EntropyMethod {
  automatic,
  closed_form,
  exact_enumeration,
  matrix_power,
  max_product_dp,
  monte_carlo,
  plugin_empirical,
};

std::string to_string(EntropyMethod method);

struct EntropyValue {
  double value = 0.0;
  double std_error = 0.0;  // nonzero only for monte_carlo
  EntropyMethod method = EntropyMethod::automatic;
  // Certified lower bound on the quantity rather than its exact value.
  bool lower_bound = false;
  std::size_t replicas = 0;
};

struct EntropyOptions {
  EntropyMethod method = EntropyMethod::automatic;
  std::uint64_t enumeration_budget = kEnumerationBudget;
};

// Block Renyi entropy H_gamma(n) of the stationary law. gamma = 0, 1 and
// kInfiniteOrder give the Hartley, Shannon and min-entropy. Markov chains use
// powers of the elementwise gamma-th power of the transition matrix; iid
// models use n * H_gamma(1); other kinds enumerate blocks.
EntropyValue renyi_block_entropy(const ProcessModel& model, std::size_t n, double gamma,
                                 const EntropyOptions& options = {});

// Context for the conditional Renyi entropy.
struct ContextMode {
  enum class Kind { infinite_reduced, finite };
  Kind kind = Kind::infinite_reduced;
  std::size_t length = 0;          // finite: number of past symbols
  bool monte_carlo = false;        // finite: sample contexts instead of enumerating
  std::size_t replicas = 10'000;   // monte_carlo only
  std::uint64_t seed = 0;          // monte_carlo only

  static ContextMode infinite() { return {}; }
  static ContextMode finite(std::size_t length) { return {Kind::finite, length}; }
  static ContextMode sampled(std::size_t length, std::size_t replicas, std::uint64_t seed) {
    return {Kind::finite, length, true, replicas, seed};
  }
};

// -1/(gamma-1) log E[P(X_1^n | past)^(gamma-1)] for gamma > 1. The infinite
// past is supported when it reduces to the hidden state (iid, markov,
// periodic); a finite context of any length works for every stationary kind,
// exactly when enumerable or by Monte Carlo over sampled contexts.
EntropyValue conditional_renyi_entropy(const ProcessModel& model, std::size_t n, double gamma,
                                       const ContextMode& context = ContextMode::infinite(),
                                       const EntropyOptions& options = {});

// -log of the largest conditional block probability given the past, by a
// max-product recursion over hidden states. Exact for iid, markov and
// periodic; for kinds with a hidden state finer than the past the result is
// flagged as a certified lower bound.
EntropyValue conditional_min_entropy(const ProcessModel& model, std::size_t n);

// Renyi-gamma entropy of the empirical distribution of the x.size() - k + 1
// overlapping k-blocks. A biased estimator, for exploratory curves only.
double plugin_entropy_from_corpus(const Sequence& x, std::size_t k, double gamma);

// Shannon entropy rate: closed forms for iid, markov and periodic models.
double entropy_rate(const ProcessModel& model);

enum class Functional { hartley, shannon, renyi, min, cond_renyi, cond_min, tilde_cond_renyi };

std::string to_string(Functional f);
Functional functional_from_string(const std::string& name);

struct CurvePoint {
  std::size_t n = 0;
  double value = 0.0;
  double std_error = 0.0;
  EntropyMethod method = EntropyMethod::automatic;
};

struct EntropyCurve {
  Functional functional = Functional::shannon;
  double gamma = 1.0;
  std::vector<CurvePoint> points;
  std::string source;  // model name or corpus path
};

struct CurveRequest {
  Functional functional = Functional::shannon;
  double gamma = 1.0;               // renyi, cond_renyi, tilde_cond_renyi
  std::optional<std::size_t> context_length;  // tilde_cond_renyi; default N(n) + 1
  std::size_t replicas = 10'000;    // tilde_cond_renyi Monte Carlo fallback
  std::uint64_t seed = 0;
};

EntropyCurve compute_curve(const ProcessModel& model, const CurveRequest& request,
                           const std::vector<std::size_t>& ns,
                           const EntropyOptions& options = {});

// CSV with header functional,gamma,n,value_nats,method (12 significant digits).
// With `bits`, a value_bits column is appended.
std::string curves_to_csv(const std::vector<EntropyCurve>& curves, bool bits = false);

}  // namespace maxrep
