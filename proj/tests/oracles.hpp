#pragma once

// Definitional, deliberately slow reference implementations. None of them
// call into the library's algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxrep/processes.hpp"

namespace oracle {

using maxrep::Matrix;
using maxrep::Symbol;
using Word = std::vector<Symbol>;

inline Word from_string(const std::string& s) {
  Word w;
  for (char c : s) w.push_back(static_cast<Symbol>(c - 'a'));
  return w;
}

inline Word random_word(std::mt19937_64& rng, std::size_t n, Symbol alphabet) {
  Word w(n);
  for (auto& s : w) s = static_cast<Symbol>(rng() % alphabet);
  return w;
}

// max k such that x[i, i+k) == x[j, j+k) for some i < j: extend every pair.
inline std::size_t max_repetition(const Word& x) {
  const std::size_t n = x.size();
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t k = 0;
      while (j + k < n && x[i + k] == x[j + k]) ++k;
      best = std::max(best, k);
    }
  }
  return best;
}

inline std::size_t subword_complexity(const Word& x, std::size_t k) {
  std::set<Word> seen;
  for (std::size_t i = 0; i + k <= x.size(); ++i) seen.emplace(x.begin() + i, x.begin() + i + k);
  return seen.size();
}

inline std::size_t longest_match(const Word& past, const Word& future) {
  std::size_t best = 0;
  for (std::size_t k = 1; k <= future.size(); ++k) {
    bool found = false;
    for (std::size_t i = 0; i + k <= past.size() && !found; ++i) {
      found = std::equal(future.begin(), future.begin() + k, past.begin() + i);
    }
    if (!found) break;
    best = k;
  }
  return best;
}

// {value, truncated}; shifts 1..anchor, optional cap.
inline std::pair<std::uint64_t, bool> waiting_time(const Word& window, std::size_t anchor,
                                                   const Word& w,
                                                   std::optional<std::uint64_t> cap) {
  for (std::size_t i = 1; i <= anchor; ++i) {
    if (cap && i > *cap) return {*cap, false};
    bool eq = true;
    for (std::size_t j = 0; j < w.size(); ++j) eq = eq && window[anchor - i + j] == w[j];
    if (eq) return {i, false};
  }
  if (cap && anchor >= *cap) return {*cap, false};
  return {anchor, true};
}

inline void for_each_word(Symbol alphabet, std::size_t n, const std::function<void(const Word&)>& fn) {
  Word w(n, 0);
  while (true) {
    fn(w);
    std::size_t i = n;
    while (i > 0) {
      if (++w[i - 1] < alphabet) break;
      w[--i] = 0;
    }
    if (i == 0) return;
  }
}

// Stationary law by Gaussian elimination on pi (T - I) = 0, sum pi = 1.
// Assumes a unique stationary distribution.
inline std::vector<double> stationary(const Matrix& t) {
  const std::size_t s = t.size();
  std::vector<std::vector<double>> a(s, std::vector<double>(s + 1, 0.0));
  for (std::size_t i = 0; i + 1 < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) a[i][j] = t[j][i] - (i == j ? 1.0 : 0.0);
  }
  for (std::size_t j = 0; j < s; ++j) a[s - 1][j] = 1.0;
  a[s - 1][s] = 1.0;
  for (std::size_t c = 0; c < s; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < s; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    for (std::size_t r = 0; r < s; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= s; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<double> pi(s);
  for (std::size_t i = 0; i < s; ++i) pi[i] = a[i][s] / a[i][i];
  return pi;
}

// Hidden-path description: P(w) = sum over paths of
// init(s1) E(s1, w1) prod T(s_{i-1}, s_i) E(s_i, w_i).
struct PathModel {
  Matrix transition;
  Matrix emission;
  std::vector<double> initial;
};

inline double path_prob(const PathModel& m, const Word& w) {
  if (w.empty()) return 1.0;
  const std::size_t s = m.initial.size();
  double total = 0.0;
  std::vector<std::size_t> path(w.size(), 0);
  while (true) {
    double p = m.initial[path[0]] * m.emission[path[0]][w[0]];
    for (std::size_t i = 1; i < w.size() && p > 0.0; ++i) {
      p *= m.transition[path[i - 1]][path[i]] * m.emission[path[i]][w[i]];
    }
    total += p;
    std::size_t i = w.size();
    while (i > 0) {
      if (++path[i - 1] < s) break;
      path[--i] = 0;
    }
    if (i == 0) break;
  }
  return total;
}

// Exact block probability straight from a model's declared parameters.
inline double block_prob(const maxrep::ProcessModel& model, const Word& w) {
  using namespace maxrep;
  const Symbol a = model.alphabet_size();
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, IidParams>) {
          double r = 1.0;
          for (Symbol s : w) r *= p.probabilities[s];
          return r;
        } else if constexpr (std::is_same_v<P, MarkovParams>) {
          // The state is the symbol: pi(w1) prod T(w_{i-1}, w_i).
          if (w.empty()) return 1.0;
          double r = stationary(p.transition)[w[0]];
          for (std::size_t i = 1; i < w.size(); ++i) r *= p.transition[w[i - 1]][w[i]];
          return r;
        } else if constexpr (std::is_same_v<P, HiddenMarkovParams>) {
          Matrix e;
          if (p.emission) {
            e = *p.emission;
          } else {
            e.assign(p.transition.size(), std::vector<double>(a, 0.0));
            for (std::size_t s = 0; s < e.size(); ++s) e[s][(*p.emission_map)[s]] = 1.0;
          }
          return path_prob({p.transition, e, stationary(p.transition)}, w);
        } else if constexpr (std::is_same_v<P, DitheredParams>) {
          // X = W + Z mod a: sum over every dither sequence.
          double total = 0.0;
          for_each_word(a, w.size(), [&](const Word& z) {
            double q = 1.0;
            Word base(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) {
              q *= p.dither[z[i]];
              base[i] = (w[i] + a - z[i]) % a;
            }
            if (q > 0.0) total += q * block_prob(*p.base, base);
          });
          return total;
        } else if constexpr (std::is_same_v<P, PeriodicParams>) {
          const std::size_t period = p.period.size();
          std::size_t hits = 0;
          for (std::size_t phase = 0; phase < period; ++phase) {
            bool eq = true;
            for (std::size_t i = 0; i < w.size(); ++i) eq = eq && p.period[(phase + i) % period] == w[i];
            hits += eq;
          }
          return static_cast<double>(hits) / static_cast<double>(period);
        } else {
          throw std::logic_error("no oracle for empirical_permutation");
        }
      },
      model.params());
}

inline double renyi(const maxrep::ProcessModel& model, std::size_t n, double gamma) {
  double acc = 0.0, mx = 0.0;
  std::size_t support = 0;
  for_each_word(model.alphabet_size(), n, [&](const Word& w) {
    const double p = block_prob(model, w);
    if (p <= 0.0) return;
    ++support;
    mx = std::max(mx, p);
    if (gamma == 1.0) {
      acc -= p * std::log(p);
    } else if (!std::isinf(gamma) && gamma != 0.0) {
      acc += std::pow(p, gamma);
    }
  });
  if (gamma == 0.0) return std::log(static_cast<double>(support));
  if (gamma == 1.0) return acc;
  if (std::isinf(gamma)) return -std::log(mx);
  return std::log(acc) / (1.0 - gamma);
}

// -1/(gamma-1) log sum_{c, w} P(c) P(w | c)^gamma over contexts of length m.
inline double finite_context_renyi(const maxrep::ProcessModel& model, std::size_t n, double gamma,
                                   std::size_t m) {
  double acc = 0.0;
  for_each_word(model.alphabet_size(), m, [&](const Word& c) {
    const double pc = block_prob(model, c);
    if (pc <= 0.0) return;
    for_each_word(model.alphabet_size(), n, [&](const Word& w) {
      Word cw(c);
      cw.insert(cw.end(), w.begin(), w.end());
      const double pcw = block_prob(model, cw);
      if (pcw > 0.0) acc += pc * std::pow(pcw / pc, gamma);
    });
  });
  return -std::log(acc) / (gamma - 1.0);
}

// -log max over contexts (length m) and words of P(w | c).
inline double finite_context_min(const maxrep::ProcessModel& model, std::size_t n, std::size_t m) {
  double best = 0.0;
  for_each_word(model.alphabet_size(), m, [&](const Word& c) {
    const double pc = block_prob(model, c);
    if (pc <= 0.0) return;
    for_each_word(model.alphabet_size(), n, [&](const Word& w) {
      Word cw(c);
      cw.insert(cw.end(), w.begin(), w.end());
      best = std::max(best, block_prob(model, cw) / pc);
    });
  });
  return -std::log(best);
}

}  // namespace oracle
