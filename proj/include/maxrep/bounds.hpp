#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "maxrep/processes.hpp"

namespace maxrep {

enum class Verdict { holds, violated, inconclusive };
std::string to_string(Verdict v);

// How lhs is compared with rhs.
enum class Relation {
  less_equal,  // lhs <= rhs
  less,        // lhs < rhs (deterministic growth envelopes)
  equal,       // |lhs - rhs| within tolerance (Kac identity)
};
std::string to_string(Relation r);

// One grid row of one inequality check.
struct BoundReport {
  std::string bound_id;
  std::string model;
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<double> gamma;
  std::optional<double> m;
  std::optional<double> C;
  std::optional<std::string> word;  // Kac rows: symbols joined by '.'
  double lhs = 0.0;
  double lhs_se = 0.0;
  double rhs = 0.0;
  double rhs_se = 0.0;
  Relation relation = Relation::less_equal;
  double tolerance_se = 3.0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  // Recurrence searches that hit the shift limit, and samples left out of an
  // estimate because of it.
  std::size_t truncated = 0;
  std::size_t excluded = 0;
  Verdict verdict = Verdict::inconclusive;
  std::string note;
};

// Violated only when lhs - tol * lhs_se > rhs + tol * rhs_se (one-sided) or
// |lhs - rhs| > tol * (lhs_se + rhs_se) (equality), with a further 1e-9
// absolute allowance for both. `less` is strict and has no allowance.
// Non-finite estimates are inconclusive.
Verdict judge(double lhs, double lhs_se, double rhs, double rhs_se, Relation relation,
              double tolerance_se);

struct MonteCarloConfig {
  std::size_t replicas = 100'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  // Backward search limit for untrimmed recurrence times.
  std::uint64_t max_shift = std::uint64_t{1} << 22;
  // Test-only fault injection: multiplies simulated recurrence times in the
  // Kac mean. Must stay 1 outside negative-control tests.
  double kac_fault_factor = 1.0;
};

// Recurrence time R_k of the block X_1^k = block whose hidden state at time 1
// is `state_at_one`, searching a past drawn lazily from the time-reversed
// chain. Returns {value, truncated}; a truncated value equals max_shift.
std::pair<std::uint64_t, bool> simulate_recurrence(const HiddenChain& chain, Rng& rng,
                                                   std::span<const Symbol> block,
                                                   std::size_t state_at_one,
                                                   std::uint64_t max_shift);

// P(L(X_1^n) < k) <= E log R_k / log(n - k + 1) and, per gamma,
// P(L(X_1^n) >= k) <= (n - k + 1)^gamma E R_k^(1 - gamma).
// Truncated recurrences enter E log R_k at the shift limit and E R^(1-gamma)
// as zero, both of which can only shrink the right-hand sides.
std::vector<BoundReport> check_recurrence_repetition(const ProcessModel& model, std::size_t n,
                                                     std::size_t k,
                                                     const std::vector<double>& gammas,
                                                     const MonteCarloConfig& mc);

// P(S_k <= C / P(X_1^k | X_{-N(k)}^0)) <= C (1 + k log |alphabet|) with
// S_k = min(R_k, N(k)) computed exactly from a window of N(k) + 1 past symbols.
std::vector<BoundReport> check_trimmed_recurrence(const ProcessModel& model, std::size_t k,
                                                  const std::vector<double>& Cs,
                                                  const MonteCarloConfig& mc);

// E(R_k | X_1^k = w) = 1 / P(w) for each word (all positive-probability words
// when `words` is empty), within 4 standard errors; plus the tail bound
// P(R_k >= C / P(X_1^k)) <= 1 / C for each C in tail_Cs.
std::vector<BoundReport> check_kac(const ProcessModel& model, std::size_t k,
                                   const std::vector<std::vector<Symbol>>& words,
                                   const std::vector<double>& tail_Cs,
                                   const MonteCarloConfig& mc);

// P(L < k) <= E f / (n-k+1), P(L >= k) <= n-k+1 - E f, and per m
// E f / (n-k+1) <= 1/m + exp(m H(k)) / (n-k+1), with f = f(k | X_1^n).
std::vector<BoundReport> check_subword_bounds(const ProcessModel& model, std::size_t n,
                                              std::size_t k, const std::vector<double>& ms,
                                              const MonteCarloConfig& mc);

enum class GrowthTheorem { T1, T2, T6, T7 };
std::string to_string(GrowthTheorem t);
GrowthTheorem growth_theorem_from_string(const std::string& name);

struct GrowthOptions {
  std::size_t burn_in = 256;
  double alpha = 0.9;  // T6 exponent, must be below 1
  double gamma = 2.0;  // T7 order
};

// Number of positive-probability blocks of length k, i.e. exp(H_0(k)).
double positive_block_count(const ProcessModel& model, std::size_t k);

// One trajectory of length max(n_grid); each grid point gives one report.
//  T1: k*(n) <= L, k*(n) the largest k with exp(H_0(k)) < n - k + 1.
//  T2: L < (3 / B) log n with B = H_inf^cond(1) <= H_inf^cond(k) / k.
//  T6: (log n)^alpha < L for alpha < 1, using H(k) <= H(1) k.
//  T7: L < gamma (gamma+1) / (gamma-1) / B log n with
//      B = -log(max_s sum_t T(s,t)^gamma) / (gamma - 1) (iid and markov only).
// Points below burn_in are reported as inconclusive. CapabilityError when the
// entropy hypothesis cannot be certified for the model.
std::vector<BoundReport> check_growth_theorems(const ProcessModel& model, GrowthTheorem theorem,
                                               const std::vector<std::size_t>& n_grid,
                                               std::uint64_t seed,
                                               const GrowthOptions& options = {});

// Default parameter sweep.
struct BoundsGrid {
  std::vector<std::pair<std::size_t, std::size_t>> recurrence_nk{{32, 5}, {64, 7}};
  std::vector<double> gammas{1.5, 2.0, 3.0};
  std::vector<std::size_t> trimmed_k{2, 3, 4};
  std::vector<double> Cs{0.01, 0.05, 0.1, 0.5};
  std::size_t kac_k = 3;
  std::vector<double> tail_Cs{1.0, 2.0, 4.0, 8.0};
  std::vector<std::pair<std::size_t, std::size_t>> subword_nk{{64, 6}, {128, 8}};
  std::vector<double> ms{1.0, 2.0, 4.0, 8.0};
};

enum class CheckId {
  recurrence_repetition,
  trimmed_recurrence,
  kac,
  subword,
  growth_T1,
  growth_T2,
  growth_T6,
  growth_T7,
};
std::string to_string(CheckId id);
CheckId check_id_from_string(const std::string& name);
std::vector<CheckId> all_checks();

struct SuiteResult {
  std::vector<BoundReport> reports;
  std::vector<std::string> capability_errors;  // "<check>: <message>"
  bool any_violated() const;
};

SuiteResult run_bound_suite(const ProcessModel& model, const std::vector<CheckId>& checks,
                            const BoundsGrid& grid, const MonteCarloConfig& mc,
                            const std::vector<std::size_t>& growth_grid,
                            const GrowthOptions& growth = {});

nlohmann::json report_to_json(const BoundReport& report);
std::string reports_to_csv(const std::vector<BoundReport>& reports);

}  // namespace maxrep
