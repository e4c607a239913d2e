#include "maxrep/sequence.hpp"

#include <algorithm>
#include <string>

#include "maxrep/errors.hpp"

namespace maxrep {

Sequence::Sequence(std::vector<Symbol> symbols, Symbol alphabet_size)
    : symbols_(std::move(symbols)), alphabet_size_(alphabet_size) {
  if (alphabet_size_ == 0) {
    throw InputError("alphabet_size must be positive");
  }
  auto bad = std::find_if(symbols_.begin(), symbols_.end(),
                          [&](Symbol s) { return s >= alphabet_size_; });
  if (bad != symbols_.end()) {
    throw InputError("symbol " + std::to_string(*bad) + " at position " +
                     std::to_string(bad - symbols_.begin()) +
                     " is outside alphabet of size " +
                     std::to_string(alphabet_size_));
  }
}

Sequence Sequence::from_bytes(std::string_view bytes) {
  std::vector<Symbol> symbols(bytes.size());
  std::transform(bytes.begin(), bytes.end(), symbols.begin(),
                 [](char c) { return static_cast<unsigned char>(c); });
  return Sequence(std::move(symbols), 256);
}

Sequence Sequence::slice(std::size_t offset, std::size_t length) const {
  if (offset > symbols_.size() || length > symbols_.size() - offset) {
    throw InputError("slice [" + std::to_string(offset) + ", " +
                     std::to_string(offset + length) +
                     ") exceeds sequence length " +
                     std::to_string(symbols_.size()));
  }
  Sequence out;
  out.alphabet_size_ = alphabet_size_;
  out.symbols_.assign(symbols_.begin() + static_cast<std::ptrdiff_t>(offset),
                      symbols_.begin() + static_cast<std::ptrdiff_t>(offset + length));
  return out;
}

Sequence concatenate(const Sequence& a, const Sequence& b) {
  std::vector<Symbol> joined(a.symbols().begin(), a.symbols().end());
  joined.insert(joined.end(), b.symbols().begin(), b.symbols().end());
  return Sequence(std::move(joined), std::max(a.alphabet_size(), b.alphabet_size()));
}

}  // namespace maxrep
