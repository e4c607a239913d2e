#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maxrep/sequence.hpp"

namespace maxrep {

// Longest length k such that some length-k substring starts at two distinct
// positions; occurrences may overlap ("aaaa" -> 3). Zero when nothing repeats.
std::size_t maximal_repetition(std::span<const Symbol> x);
inline std::size_t maximal_repetition(const Sequence& x) {
  return maximal_repetition(x.symbols());
}

struct RepetitionPoint {
  std::size_t n = 0;
  std::size_t repetition = 0;
  friend bool operator==(const RepetitionPoint&, const RepetitionPoint&) = default;
};

// Maximal repetition of each prefix x[0, n) for n in grid. The grid must be
// strictly increasing and bounded by x.size(), otherwise InputError.
std::vector<RepetitionPoint> maximal_repetition_profile(
    const Sequence& x, std::span<const std::size_t> grid);

// Number of distinct length-k substrings; zero when k > x.size(). k >= 1.
std::size_t subword_complexity(std::span<const Symbol> x, std::size_t k);
inline std::size_t subword_complexity(const Sequence& x, std::size_t k) {
  return subword_complexity(x.symbols(), k);
}

// Largest k such that future[0, k) occurs as a substring of past.
std::size_t longest_match(std::span<const Symbol> past, std::span<const Symbol> future);
inline std::size_t longest_match(const Sequence& past, const Sequence& future) {
  return longest_match(past.symbols(), future.symbols());
}

// One observed waiting or recurrence time.
struct RecurrenceSample {
  std::uint64_t value = 0;
  // Trimming cap N(k) when the trimmed statistic min(R, N(k)) was requested.
  std::optional<std::uint64_t> trimmed_cap;
  // The window ran out before a match and before the cap; value is then the
  // number of shifts searched.
  bool truncated = false;
  friend bool operator==(const RecurrenceSample&, const RecurrenceSample&) = default;
};

// alphabet_size^k, saturating at UINT64_MAX.
std::uint64_t block_space_size(std::uint64_t alphabet_size, std::size_t k);

// Waiting time of w measured backwards from the 0-based position `anchor` of
// the window: the smallest shift i >= 1 with window[anchor - i, anchor - i + k)
// equal to w, k = |w|. The shifted copy may overlap the anchored block.
// Shifts 1..anchor are searchable. The anchored block [anchor, anchor + k)
// must lie inside the window, otherwise InputError.
RecurrenceSample waiting_time(std::span<const Symbol> window, std::size_t anchor,
                              std::span<const Symbol> w,
                              std::optional<std::uint64_t> cap = std::nullopt);
inline RecurrenceSample waiting_time(const Sequence& window, std::size_t anchor,
                                     const Sequence& w,
                                     std::optional<std::uint64_t> cap = std::nullopt) {
  return waiting_time(window.symbols(), anchor, w.symbols(), cap);
}

// Waiting time of the anchored block window[anchor, anchor + k) itself. With
// `trimmed`, the cap is alphabet_size^k.
RecurrenceSample recurrence_time(const Sequence& window, std::size_t anchor,
                                 std::size_t k, bool trimmed = false);

}  // namespace maxrep
