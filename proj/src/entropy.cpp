#include "maxrep/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "maxrep/csv.hpp"
#include "maxrep/errors.hpp"
#include "maxrep/strstat.hpp"
#include "maxrep/suffix_index.hpp"

namespace maxrep {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Neumaier compensated sum; fixed visiting order keeps results bit-stable.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

void check_order(double gamma) {
  if (std::isnan(gamma) || gamma < 0.0) throw InputError("Renyi order must be >= 0");
}

bool is_special(double gamma) { return gamma == 0.0 || gamma == 1.0 || std::isinf(gamma); }

// x^gamma with 0^gamma = 0 for every gamma, including gamma = 0.
double power0(double x, double gamma) {
  if (x <= 0.0) return 0.0;
  return gamma == 0.0 ? 1.0 : std::pow(x, gamma);
}

// Depth-first walk over positive-probability blocks of length n. The leaf
// callback receives the unnormalized state weights; their sum is the block
// probability (relative to the total mass of the start vector).
class BlockWalker {
 public:
  BlockWalker(const HiddenChain& chain, std::size_t n, std::uint64_t budget,
              std::uint64_t* leaves)
      : chain_(chain), n_(n), budget_(budget), leaves_(leaves),
        buffers_(n + 1, std::vector<double>(chain.states())) {}

  template <class Leaf>
  void run(std::span<const double> start, Leaf&& leaf) {
    std::copy(start.begin(), start.end(), buffers_[0].begin());
    visit(0, leaf);
  }

 private:
  template <class Leaf>
  void visit(std::size_t depth, Leaf& leaf) {
    const auto& v = buffers_[depth];
    if (depth == n_) {
      if (++*leaves_ > budget_) {
        throw CapabilityError("exact enumeration exceeds the block budget of " +
                              std::to_string(budget_));
      }
      leaf(std::span<const double>(v));
      return;
    }
    auto& next = buffers_[depth + 1];
    for (Symbol y = 0; y < chain_.alphabet(); ++y) {
      chain_.advance(v, y, next);
      if (!(std::accumulate(next.begin(), next.end(), 0.0) > 0.0)) continue;
      visit(depth + 1, leaf);
    }
  }

  const HiddenChain& chain_;
  std::size_t n_;
  std::uint64_t budget_;
  std::uint64_t* leaves_;
  std::vector<std::vector<double>> buffers_;
};

struct BlockSums {
  double count = 0.0;
  double shannon = 0.0;
  double power = 0.0;
  double max = 0.0;
};

BlockSums enumerate_block_sums(const HiddenChain& chain, std::size_t n, double gamma,
                               std::span<const double> start, std::uint64_t budget,
                               std::uint64_t* leaves) {
  CompensatedSum shannon, power;
  double count = 0.0, best = 0.0;
  BlockWalker walker(chain, n, budget, leaves);
  walker.run(start, [&](std::span<const double> v) {
    const double p = std::accumulate(v.begin(), v.end(), 0.0);
    count += 1.0;
    shannon.add(-p * std::log(p));
    if (!is_special(gamma)) power.add(std::pow(p, gamma));
    best = std::max(best, p);
  });
  return {count, shannon.value(), power.value(), best};
}

double renyi_from_sums(const BlockSums& s, double gamma) {
  if (gamma == 0.0) return std::log(s.count);
  if (gamma == 1.0) return s.shannon;
  if (std::isinf(gamma)) return -std::log(s.max);
  return std::log(s.power) / (1.0 - gamma);
}

// log(w . M^steps . 1) with M(s, t) = T(s, t)^gamma, rescaled every step.
double log_power_sum(const HiddenChain& chain, std::span<const double> weights, double gamma,
                     std::size_t steps) {
  const std::size_t s = chain.states();
  std::vector<double> m(s * s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) m[i * s + j] = power0(chain.transition(i, j), gamma);
  std::vector<double> u(s, 1.0), next(s);
  double log_scale = 0.0;
  for (std::size_t step = 0; step < steps; ++step) {
    double top = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < s; ++j) acc += m[i * s + j] * u[j];
      next[i] = acc;
      top = std::max(top, acc);
    }
    if (!(top > 0.0)) return kNegInf;
    for (std::size_t i = 0; i < s; ++i) u[i] = next[i] / top;
    log_scale += std::log(top);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < s; ++i) total += weights[i] * u[i];
  return std::log(total) + log_scale;
}

// log max_w P(w | S_0 = s) bound via U_j(s) = max_y sum_t T(s,t) E(t,y) U_{j-1}(t),
// maximized over states with positive stationary mass.
double log_max_conditional(const HiddenChain& chain, std::size_t n) {
  const std::size_t s = chain.states();
  std::vector<double> u(s, 1.0), next(s);
  double log_scale = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    double top = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      double best = 0.0;
      for (Symbol y = 0; y < chain.alphabet(); ++y) {
        double acc = 0.0;
        for (std::size_t t = 0; t < s; ++t) acc += chain.transition(i, t) * chain.emission(t, y) * u[t];
        best = std::max(best, acc);
      }
      next[i] = best;
      top = std::max(top, best);
    }
    for (std::size_t i = 0; i < s; ++i) u[i] = next[i] / top;
    log_scale += std::log(top);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    if (chain.stationary()[i] > 0.0) best = std::max(best, u[i]);
  }
  return std::log(best) + log_scale;
}

double iid_single_renyi(std::span<const double> p, double gamma) {
  if (gamma == 0.0) {
    return std::log(static_cast<double>(std::count_if(p.begin(), p.end(), [](double x) { return x > 0.0; })));
  }
  if (gamma == 1.0) {
    double h = 0.0;
    for (double x : p) if (x > 0.0) h -= x * std::log(x);
    return h;
  }
  if (std::isinf(gamma)) return -std::log(*std::max_element(p.begin(), p.end()));
  double s = 0.0;
  for (double x : p) s += power0(x, gamma);
  return std::log(s) / (1.0 - gamma);
}

double markov_shannon_rate(const ProcessModel& model) {
  const HiddenChain& chain = model.chain();
  double h = 0.0;
  for (std::size_t s = 0; s < chain.states(); ++s) {
    double row = 0.0;
    for (std::size_t t = 0; t < chain.states(); ++t) {
      const double p = chain.transition(s, t);
      if (p > 0.0) row -= p * std::log(p);
    }
    h += chain.stationary()[s] * row;
  }
  return h;
}

double markov_renyi(const ProcessModel& model, std::size_t n, double gamma, EntropyMethod* method) {
  const HiddenChain& chain = model.chain();
  const auto pi = chain.stationary();
  if (gamma == 1.0) {
    *method = EntropyMethod::closed_form;
    return iid_single_renyi(pi, 1.0) + static_cast<double>(n - 1) * markov_shannon_rate(model);
  }
  if (std::isinf(gamma)) {
    *method = EntropyMethod::max_product_dp;
    const std::size_t s = chain.states();
    std::vector<double> u(s, 1.0), next(s);
    double log_scale = 0.0;
    for (std::size_t step = 0; step + 1 < n; ++step) {
      double top = 0.0;
      for (std::size_t i = 0; i < s; ++i) {
        double best = 0.0;
        for (std::size_t j = 0; j < s; ++j) best = std::max(best, chain.transition(i, j) * u[j]);
        next[i] = best;
        top = std::max(top, best);
      }
      for (std::size_t i = 0; i < s; ++i) u[i] = next[i] / top;
      log_scale += std::log(top);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < s; ++i) best = std::max(best, pi[i] * u[i]);
    return -(std::log(best) + log_scale);
  }
  *method = EntropyMethod::matrix_power;
  std::vector<double> weights(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) weights[i] = power0(pi[i], gamma);
  const double log_sum = log_power_sum(chain, weights, gamma, n - 1);
  return gamma == 0.0 ? log_sum : log_sum / (1.0 - gamma);
}

struct VectorLess {
  bool operator()(const std::vector<double>& a, const std::vector<double>& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

// sum_w P(w | state weights)^gamma, memoized on the exact posterior vector.
class InnerPowerSum {
 public:
  InnerPowerSum(const HiddenChain& chain, std::size_t n, double gamma, std::uint64_t budget,
                std::uint64_t* leaves)
      : chain_(chain), n_(n), gamma_(gamma), budget_(budget), leaves_(leaves) {}

  double operator()(const std::vector<double>& posterior) {
    auto it = cache_.find(posterior);
    if (it != cache_.end()) return it->second;
    const BlockSums sums = enumerate_block_sums(chain_, n_, gamma_, posterior, budget_, leaves_);
    cache_.emplace(posterior, sums.power);
    return sums.power;
  }

 private:
  const HiddenChain& chain_;
  std::size_t n_;
  double gamma_;
  std::uint64_t budget_;
  std::uint64_t* leaves_;
  std::map<std::vector<double>, double, VectorLess> cache_;
};

}  // namespace

std::string to_string(EntropyMethod method) {
  switch (method) {
    case EntropyMethod::automatic: return "automatic";
    case EntropyMethod::closed_form: return "closed-form";
    case EntropyMethod::exact_enumeration: return "exact-enumeration";
    case EntropyMethod::matrix_power: return "matrix-power";
    case EntropyMethod::max_product_dp: return "max-product-dp";
    case EntropyMethod::monte_carlo: return "monte-carlo";
    case EntropyMethod::plugin_empirical: return "plugin-empirical";
  }
  return "unknown";
}

EntropyValue renyi_block_entropy(const ProcessModel& model, std::size_t n, double gamma,
                                 const EntropyOptions& options) {
  check_order(gamma);
  const HiddenChain& chain = model.chain();
  EntropyValue out;
  if (n == 0) {
    out.method = EntropyMethod::closed_form;
    return out;
  }
  EntropyMethod method = options.method;
  if (method == EntropyMethod::automatic) {
    if (model.kind() == ModelKind::iid) {
      method = EntropyMethod::closed_form;
    } else if (model.kind() == ModelKind::markov) {
      method = gamma == 1.0 ? EntropyMethod::closed_form
               : std::isinf(gamma) ? EntropyMethod::max_product_dp
                                   : EntropyMethod::matrix_power;
    } else {
      method = EntropyMethod::exact_enumeration;
    }
  }

  switch (method) {
    case EntropyMethod::closed_form:
      if (model.kind() == ModelKind::iid) {
        out.value = static_cast<double>(n) *
                    iid_single_renyi(std::get<IidParams>(model.params()).probabilities, gamma);
      } else if (model.kind() == ModelKind::markov && gamma == 1.0) {
        out.value = markov_renyi(model, n, gamma, &method);
      } else {
        throw CapabilityError("no closed form for this model kind and order");
      }
      break;
    case EntropyMethod::matrix_power:
    case EntropyMethod::max_product_dp: {
      if (model.kind() != ModelKind::markov) {
        throw CapabilityError(to_string(method) + " requires a markov model");
      }
      EntropyMethod used = method;
      const double v = markov_renyi(model, n, gamma, &used);
      if (used != method) throw CapabilityError(to_string(method) + " does not apply to this order");
      out.value = v;
      break;
    }
    case EntropyMethod::exact_enumeration: {
      std::uint64_t leaves = 0;
      const auto sums = enumerate_block_sums(chain, n, gamma, chain.stationary(),
                                             options.enumeration_budget, &leaves);
      out.value = renyi_from_sums(sums, gamma);
      break;
    }
    default:
      throw CapabilityError("method " + to_string(method) + " not available for block entropy");
  }
  out.method = method;
  if (out.value < 0.0 && out.value > -1e-12) out.value = 0.0;
  return out;
}

EntropyValue conditional_renyi_entropy(const ProcessModel& model, std::size_t n, double gamma,
                                       const ContextMode& context,
                                       const EntropyOptions& options) {
  if (std::isnan(gamma) || !(gamma > 1.0) || std::isinf(gamma)) {
    throw InputError("conditional Renyi entropy needs 1 < gamma < infinity");
  }
  const HiddenChain& chain = model.chain();
  EntropyValue out;
  if (n == 0) {
    out.method = EntropyMethod::closed_form;
    return out;
  }
  const double scale = -1.0 / (gamma - 1.0);

  if (context.kind == ContextMode::Kind::infinite_reduced) {
    if (!model.state_is_past_measurable()) {
      throw CapabilityError("the infinite past of a " + to_string(model.kind()) +
                            " model does not reduce to a finite statistic");
    }
    if (model.kind() == ModelKind::iid) {
      return renyi_block_entropy(model, n, gamma, options);
    }
    if (model.kind() == ModelKind::markov && options.method != EntropyMethod::exact_enumeration) {
      out.value = scale * log_power_sum(chain, chain.stationary(), gamma, n);
      out.method = EntropyMethod::matrix_power;
      return out;
    }
    std::uint64_t leaves = 0;
    CompensatedSum total;
    std::vector<double> delta(chain.states(), 0.0);
    for (std::size_t s = 0; s < chain.states(); ++s) {
      const double weight = chain.stationary()[s];
      if (!(weight > 0.0)) continue;
      std::fill(delta.begin(), delta.end(), 0.0);
      delta[s] = 1.0;
      total.add(weight * enumerate_block_sums(chain, n, gamma, delta, options.enumeration_budget,
                                              &leaves).power);
    }
    out.value = scale * std::log(total.value());
    out.method = EntropyMethod::exact_enumeration;
    return out;
  }

  std::uint64_t leaves = 0;
  InnerPowerSum inner(chain, n, gamma, options.enumeration_budget, &leaves);
  if (!context.monte_carlo) {
    CompensatedSum total;
    BlockWalker walker(chain, context.length, options.enumeration_budget, &leaves);
    std::vector<double> posterior(chain.states());
    walker.run(chain.stationary(), [&](std::span<const double> v) {
      const double p = std::accumulate(v.begin(), v.end(), 0.0);
      for (std::size_t s = 0; s < posterior.size(); ++s) posterior[s] = v[s] / p;
      total.add(p * inner(posterior));
    });
    out.value = scale * std::log(total.value());
    out.method = EntropyMethod::exact_enumeration;
    return out;
  }

  if (context.replicas < 2) throw InputError("Monte Carlo context estimate needs >= 2 replicas");
  std::vector<std::uint32_t> states;
  std::vector<Symbol> symbols;
  std::vector<double> posterior;
  CompensatedSum sum, sum_sq;
  for (std::size_t i = 0; i < context.replicas; ++i) {
    Rng rng(derive_seed(context.seed, i));
    chain.sample_path(rng, context.length, states, symbols);
    filter_context(chain, symbols, posterior);
    const double v = inner(posterior);
    sum.add(v);
    sum_sq.add(v * v);
  }
  const double r = static_cast<double>(context.replicas);
  const double mean = sum.value() / r;
  const double var = std::max(0.0, (sum_sq.value() - r * mean * mean) / (r - 1.0));
  out.value = scale * std::log(mean);
  out.std_error = std::sqrt(var / r) / ((gamma - 1.0) * mean);
  out.method = EntropyMethod::monte_carlo;
  out.replicas = context.replicas;
  return out;
}

EntropyValue conditional_min_entropy(const ProcessModel& model, std::size_t n) {
  const HiddenChain& chain = model.chain();
  EntropyValue out;
  out.method = EntropyMethod::max_product_dp;
  out.lower_bound = !model.state_is_past_measurable();
  if (n == 0) return out;
  out.value = -log_max_conditional(chain, n);
  if (out.value < 0.0 && out.value > -1e-12) out.value = 0.0;
  return out;
}

double plugin_entropy_from_corpus(const Sequence& x, std::size_t k, double gamma) {
  check_order(gamma);
  if (k == 0 || k > x.size()) {
    throw InputError("plugin entropy: need 1 <= k <= sequence length");
  }
  const auto counts = SuffixIndex(x.symbols()).block_counts(k);
  const double total = static_cast<double>(x.size() - k + 1);
  BlockSums sums;
  CompensatedSum shannon, power;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / total;
    sums.count += 1.0;
    shannon.add(-p * std::log(p));
    if (!is_special(gamma)) power.add(std::pow(p, gamma));
    sums.max = std::max(sums.max, p);
  }
  sums.shannon = shannon.value();
  sums.power = power.value();
  const double h = renyi_from_sums(sums, gamma);
  return std::abs(h) < 1e-15 ? 0.0 : h;
}

double entropy_rate(const ProcessModel& model) {
  switch (model.kind()) {
    case ModelKind::iid:
      return iid_single_renyi(std::get<IidParams>(model.params()).probabilities, 1.0);
    case ModelKind::markov:
      return markov_shannon_rate(model);
    case ModelKind::periodic_random_phase:
      return 0.0;
    default:
      throw CapabilityError("no closed-form entropy rate for " + to_string(model.kind()));
  }
}

std::string to_string(Functional f) {
  switch (f) {
    case Functional::hartley: return "hartley";
    case Functional::shannon: return "shannon";
    case Functional::renyi: return "renyi";
    case Functional::min: return "min";
    case Functional::cond_renyi: return "cond_renyi";
    case Functional::cond_min: return "cond_min";
    case Functional::tilde_cond_renyi: return "tilde_cond_renyi";
  }
  return "unknown";
}

Functional functional_from_string(const std::string& name) {
  for (Functional f : {Functional::hartley, Functional::shannon, Functional::renyi,
                       Functional::min, Functional::cond_renyi, Functional::cond_min,
                       Functional::tilde_cond_renyi}) {
    if (to_string(f) == name) return f;
  }
  throw InputError("unknown entropy functional '" + name + "'");
}

EntropyCurve compute_curve(const ProcessModel& model, const CurveRequest& request,
                           const std::vector<std::size_t>& ns, const EntropyOptions& options) {
  EntropyCurve curve;
  curve.functional = request.functional;
  curve.source = model.name;
  switch (request.functional) {
    case Functional::hartley: curve.gamma = 0.0; break;
    case Functional::shannon: curve.gamma = 1.0; break;
    case Functional::min:
    case Functional::cond_min: curve.gamma = kInfiniteOrder; break;
    default: curve.gamma = request.gamma;
  }
  for (std::size_t n : ns) {
    EntropyValue v;
    switch (request.functional) {
      case Functional::hartley:
      case Functional::shannon:
      case Functional::renyi:
      case Functional::min:
        v = renyi_block_entropy(model, n, curve.gamma, options);
        break;
      case Functional::cond_renyi:
        v = conditional_renyi_entropy(model, n, curve.gamma, ContextMode::infinite(), options);
        break;
      case Functional::cond_min:
        v = conditional_min_entropy(model, n);
        break;
      case Functional::tilde_cond_renyi: {
        const std::uint64_t space = block_space_size(model.alphabet_size(), n);
        const std::size_t length = request.context_length.value_or(
            space >= std::numeric_limits<std::size_t>::max() ? space : static_cast<std::size_t>(space) + 1);
        const std::uint64_t joint = block_space_size(model.alphabet_size(), length + n);
        if (joint <= options.enumeration_budget) {
          v = conditional_renyi_entropy(model, n, curve.gamma, ContextMode::finite(length), options);
        } else {
          v = conditional_renyi_entropy(
              model, n, curve.gamma,
              ContextMode::sampled(length, request.replicas, derive_seed(request.seed, n)), options);
        }
        break;
      }
    }
    curve.points.push_back({n, v.value, v.std_error, v.method});
  }
  return curve;
}

std::string curves_to_csv(const std::vector<EntropyCurve>& curves, bool bits) {
  std::ostringstream out;
  out << "functional,gamma,n,value_nats,method";
  if (bits) out << ",value_bits";
  out << '\n';
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << to_string(c.functional) << ',' << format_number(c.gamma) << ',' << p.n << ','
          << format_number(p.value) << ',' << to_string(p.method);
      if (bits) out << ',' << format_number(p.value / std::log(2.0));
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace maxrep
