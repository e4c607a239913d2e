#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace maxrep {

// std::mt19937_64 output is fixed by the standard. Library distributions are
// not, so every draw below goes through the helpers in this header.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Seed for replica `index` of a run seeded with `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Uniform on [0, 1) with 53 random bits.
double uniform01(Rng& rng);

// Uniform on {0, ..., bound - 1}; bound must be positive.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

// Inverse-CDF sampler over a fixed probability vector.
class Categorical {
 public:
  Categorical() = default;
  explicit Categorical(std::span<const double> probabilities);

  std::size_t operator()(Rng& rng) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

// Runs fn(i, rng_i) for i in [0, count) with rng_i seeded by derive_seed(seed, i)
// and stores the results by index. Output is independent of `workers`.
template <class Result, class Fn>
std::vector<Result> run_replicas(std::size_t count, std::uint64_t seed,
                                 unsigned workers, Fn&& fn) {
  std::vector<Result> out(count);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, i));
      out[i] = fn(i, rng);
    }
  };
  if (workers <= 1 || count < 2) {
    run_range(0, count);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t begin = 0; begin < count; begin += chunk) {
    pool.emplace_back(run_range, begin, std::min(count, begin + chunk));
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace maxrep
