#include "maxrep/strstat.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "maxrep/errors.hpp"
#include "maxrep/suffix_index.hpp"

namespace maxrep {

std::size_t maximal_repetition(std::span<const Symbol> x) {
  if (x.size() < 2) return 0;
  return SuffixIndex(x).max_lcp();
}

std::vector<RepetitionPoint> maximal_repetition_profile(
    const Sequence& x, std::span<const std::size_t> grid) {
  std::vector<RepetitionPoint> out;
  out.reserve(grid.size());
  std::size_t previous = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t n = grid[i];
    if (n > x.size()) {
      throw InputError("grid value " + std::to_string(n) +
                       " exceeds sequence length " + std::to_string(x.size()));
    }
    if (i > 0 && n <= previous) {
      throw InputError("grid must be strictly increasing");
    }
    previous = n;
    out.push_back({n, maximal_repetition(x.symbols().first(n))});
  }
  return out;
}

std::size_t subword_complexity(std::span<const Symbol> x, std::size_t k) {
  if (k == 0) throw InputError("subword_complexity: k must be positive");
  if (k > x.size()) return 0;
  return SuffixIndex(x).distinct_blocks(k);
}

std::size_t longest_match(std::span<const Symbol> past, std::span<const Symbol> future) {
  if (past.empty() || future.empty()) return 0;
  // Z-function over future + separator + past.
  constexpr std::uint64_t kSeparator = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> s;
  s.reserve(future.size() + past.size() + 1);
  s.insert(s.end(), future.begin(), future.end());
  s.push_back(kSeparator);
  s.insert(s.end(), past.begin(), past.end());

  const std::size_t n = s.size();
  std::vector<std::size_t> z(n, 0);
  std::size_t best = 0;
  for (std::size_t i = 1, l = 0, r = 0; i < n; ++i) {
    if (i < r) z[i] = std::min(r - i, z[i - l]);
    while (i + z[i] < n && s[z[i]] == s[i + z[i]]) ++z[i];
    if (i + z[i] > r) {
      l = i;
      r = i + z[i];
    }
    if (i > future.size()) best = std::max(best, z[i]);
  }
  return best;
}

std::uint64_t block_space_size(std::uint64_t alphabet_size, std::size_t k) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (alphabet_size != 0 && out > std::numeric_limits<std::uint64_t>::max() / alphabet_size) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out *= alphabet_size;
  }
  return out;
}

RecurrenceSample waiting_time(std::span<const Symbol> window, std::size_t anchor,
                              std::span<const Symbol> w,
                              std::optional<std::uint64_t> cap) {
  const std::size_t k = w.size();
  if (k == 0) throw InputError("waiting_time: empty word");
  if (anchor >= window.size() || k > window.size() - anchor) {
    throw InputError("waiting_time: anchored block [" + std::to_string(anchor) + ", " +
                     std::to_string(anchor + k) + ") outside window of length " +
                     std::to_string(window.size()));
  }
  if (cap && *cap == 0) throw InputError("waiting_time: cap must be positive");

  RecurrenceSample out;
  out.trimmed_cap = cap;
  const std::uint64_t searchable = anchor;
  const std::uint64_t limit = cap ? std::min<std::uint64_t>(*cap, searchable) : searchable;
  for (std::uint64_t i = 1; i <= limit; ++i) {
    const std::size_t start = anchor - static_cast<std::size_t>(i);
    if (std::equal(w.begin(), w.end(), window.begin() + static_cast<std::ptrdiff_t>(start))) {
      out.value = i;
      return out;
    }
  }
  if (cap && *cap <= searchable) {
    out.value = *cap;
  } else {
    out.value = searchable;
    out.truncated = true;
  }
  return out;
}

RecurrenceSample recurrence_time(const Sequence& window, std::size_t anchor,
                                 std::size_t k, bool trimmed) {
  if (k == 0) throw InputError("recurrence_time: k must be positive");
  if (anchor >= window.size() || k > window.size() - anchor) {
    throw InputError("recurrence_time: anchored block outside window");
  }
  auto block = window.symbols().subspan(anchor, k);
  std::optional<std::uint64_t> cap;
  if (trimmed) cap = block_space_size(window.alphabet_size(), k);
  return waiting_time(window.symbols(), anchor, block, cap);
}

}  // namespace maxrep
