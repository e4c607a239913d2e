#include "maxrep/random.hpp"

#include <algorithm>

#include "maxrep/errors.hpp"

namespace maxrep {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw InputError("uniform_below: bound must be positive");
  // Rejection of the top partial block keeps the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

Categorical::Categorical(std::span<const double> probabilities) {
  cumulative_.reserve(probabilities.size());
  double acc = 0.0;
  for (double p : probabilities) {
    acc += p;
    cumulative_.push_back(acc);
  }
}

std::size_t Categorical::operator()(Rng& rng) const {
  const double u = uniform01(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
  if (idx < cumulative_.size()) return idx;
  // Rounding at the top end: fall back to the last category with mass.
  idx = cumulative_.size() - 1;
  while (idx > 0 && cumulative_[idx] == cumulative_[idx - 1]) --idx;
  return idx;
}

}  // namespace maxrep
