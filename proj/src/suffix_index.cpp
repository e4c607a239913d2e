#include "maxrep/suffix_index.hpp"

#include <algorithm>
#include <limits>

#include "maxrep/errors.hpp"

namespace maxrep {

namespace {

std::vector<std::uint32_t> build_suffix_array(std::span<const Symbol> text) {
  const std::size_t n = text.size();
  std::vector<std::uint32_t> sa(n), rank(n), tmp(n);
  if (n == 0) return sa;

  // Dense initial ranks.
  std::vector<Symbol> alphabet(text.begin(), text.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  for (std::size_t i = 0; i < n; ++i) {
    rank[i] = static_cast<std::uint32_t>(
        std::lower_bound(alphabet.begin(), alphabet.end(), text[i]) - alphabet.begin());
  }
  std::size_t classes = alphabet.size();
  std::vector<std::uint32_t> count(std::max(n, classes) + 1);

  auto counting_sort_by_rank = [&](const std::vector<std::uint32_t>& order) {
    std::fill(count.begin(), count.begin() + static_cast<std::ptrdiff_t>(classes) + 1, 0u);
    for (std::uint32_t i : order) ++count[rank[i] + 1];
    for (std::size_t c = 1; c <= classes; ++c) count[c] += count[c - 1];
    for (std::uint32_t i : order) sa[count[rank[i]]++] = i;
  };

  for (std::size_t i = 0; i < n; ++i) tmp[i] = static_cast<std::uint32_t>(i);
  counting_sort_by_rank(tmp);

  for (std::size_t h = 1; classes < n; h *= 2) {
    // Order by second key: suffixes shorter than h first, then by rank of i + h.
    std::size_t p = 0;
    for (std::size_t i = n - std::min(h, n); i < n; ++i) tmp[p++] = static_cast<std::uint32_t>(i);
    for (std::size_t r = 0; r < n; ++r) {
      if (sa[r] >= h) tmp[p++] = static_cast<std::uint32_t>(sa[r] - h);
    }
    counting_sort_by_rank(tmp);

    auto second = [&](std::uint32_t i) -> std::int64_t {
      return i + h < n ? static_cast<std::int64_t>(rank[i + h]) : -1;
    };
    tmp[sa[0]] = 0;
    std::uint32_t c = 0;
    for (std::size_t r = 1; r < n; ++r) {
      const std::uint32_t a = sa[r - 1], b = sa[r];
      if (rank[a] != rank[b] || second(a) != second(b)) ++c;
      tmp[b] = c;
    }
    rank.swap(tmp);
    classes = static_cast<std::size_t>(c) + 1;
  }
  return sa;
}

std::vector<std::uint32_t> kasai_lcp(std::span<const Symbol> text,
                                     const std::vector<std::uint32_t>& sa) {
  const std::size_t n = text.size();
  std::vector<std::uint32_t> lcp(n, 0), inverse(n);
  for (std::size_t r = 0; r < n; ++r) inverse[sa[r]] = static_cast<std::uint32_t>(r);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (inverse[i] == 0) {
      h = 0;
      continue;
    }
    const std::size_t j = sa[inverse[i] - 1];
    while (i + h < n && j + h < n && text[i + h] == text[j + h]) ++h;
    lcp[inverse[i]] = static_cast<std::uint32_t>(h);
    if (h > 0) --h;
  }
  return lcp;
}

}  // namespace

SuffixIndex::SuffixIndex(std::span<const Symbol> text) {
  if (text.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("SuffixIndex: text too long for 32-bit positions");
  }
  sa_ = build_suffix_array(text);
  lcp_ = kasai_lcp(text, sa_);
}

std::size_t SuffixIndex::max_lcp() const {
  if (lcp_.empty()) return 0;
  return *std::max_element(lcp_.begin(), lcp_.end());
}

std::size_t SuffixIndex::distinct_blocks(std::size_t k) const {
  if (k == 0) return 1;
  const std::size_t n = sa_.size();
  std::size_t distinct = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (n - sa_[r] >= k && lcp_[r] < k) ++distinct;
  }
  return distinct;
}

std::vector<std::size_t> SuffixIndex::block_counts(std::size_t k) const {
  std::vector<std::size_t> counts;
  const std::size_t n = sa_.size();
  for (std::size_t r = 0; r < n; ++r) {
    if (n - sa_[r] < k) continue;
    if (lcp_[r] < k || counts.empty()) {
      counts.push_back(1);
    } else {
      ++counts.back();
    }
  }
  return counts;
}

}  // namespace maxrep
