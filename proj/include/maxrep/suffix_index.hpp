#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "maxrep/sequence.hpp"

namespace maxrep {

// Suffix array with the Kasai LCP array. Construction is prefix doubling with
// radix passes, O(n log n).
class SuffixIndex {
 public:
  explicit SuffixIndex(std::span<const Symbol> text);

  std::size_t size() const { return sa_.size(); }
  // Start positions of the suffixes in lexicographic order.
  std::span<const std::uint32_t> suffix_array() const { return sa_; }
  // lcp()[r] is the longest common prefix of suffixes sa[r-1] and sa[r]; lcp()[0] == 0.
  std::span<const std::uint32_t> lcp() const { return lcp_; }

  // Largest LCP value, i.e. the longest substring occurring at two positions.
  std::size_t max_lcp() const;

  // Number of distinct length-k substrings.
  std::size_t distinct_blocks(std::size_t k) const;

  // Occurrence counts of the distinct length-k substrings, in lexicographic order.
  std::vector<std::size_t> block_counts(std::size_t k) const;

 private:
  std::vector<std::uint32_t> sa_;
  std::vector<std::uint32_t> lcp_;
};

}  // namespace maxrep
