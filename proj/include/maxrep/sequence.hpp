#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace maxrep {

using Symbol = std::uint32_t;

// A finite string over the alphabet {0, ..., alphabet_size - 1}.
class Sequence {
 public:
  Sequence() = default;
  // Throws InputError if alphabet_size is zero or any symbol is out of range.
  Sequence(std::vector<Symbol> symbols, Symbol alphabet_size);

  // Raw bytes; alphabet_size is 256.
  static Sequence from_bytes(std::string_view bytes);

  std::span<const Symbol> symbols() const { return symbols_; }
  Symbol alphabet_size() const { return alphabet_size_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }

  // Contiguous slice [offset, offset + length); throws InputError when out of range.
  Sequence slice(std::size_t offset, std::size_t length) const;
  Sequence prefix(std::size_t length) const { return slice(0, length); }

  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  std::vector<Symbol> symbols_;
  Symbol alphabet_size_ = 1;
};

Sequence concatenate(const Sequence& a, const Sequence& b);

}  // namespace maxrep
