#include "cantor/bitword.hpp"

#include <algorithm>

#include "cantor/errors.hpp"

namespace cantor {

namespace {
constexpr std::string_view kEmptyGlyph = "∅";
}

BitWord::BitWord(std::string_view text) {
  if (text == kEmptyGlyph || text == "-") return;
  bits_.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(ErrorKind::ParseError, "bad bit word '" + std::string(text) + "'");
    }
    bits_.push_back(c == '1' ? 1 : 0);
  }
}

BitWord BitWord::zeros(std::size_t n) {
  BitWord w;
  w.bits_.assign(n, 0);
  return w;
}

BitWord BitWord::ones(std::size_t n) {
  BitWord w;
  w.bits_.assign(n, 1);
  return w;
}

BitWord BitWord::from_index(std::uint64_t index, unsigned len) {
  BitWord w;
  w.bits_.resize(len);
  for (unsigned i = 0; i < len; ++i) {
    w.bits_[len - 1 - i] = static_cast<std::uint8_t>((index >> i) & 1U);
  }
  return w;
}

bool BitWord::at(std::size_t i) const {
  if (i >= bits_.size()) throw Error(ErrorKind::BadLength, "bit index out of range");
  return bits_[i] != 0;
}

BitWord BitWord::prefix(std::size_t n) const {
  BitWord w;
  w.bits_.assign(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(std::min(n, bits_.size())));
  return w;
}

BitWord BitWord::suffix_from(std::size_t n) const {
  BitWord w;
  if (n < bits_.size()) w.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(n), bits_.end());
  return w;
}

BitWord BitWord::concat(const BitWord& tail) const {
  BitWord w = *this;
  w.bits_.insert(w.bits_.end(), tail.bits_.begin(), tail.bits_.end());
  return w;
}

BitWord BitWord::appended(bool bit) const {
  BitWord w = *this;
  w.push_back(bit);
  return w;
}

BitWord BitWord::resized(std::size_t n) const {
  BitWord w = *this;
  w.bits_.resize(n, 0);
  return w;
}

bool BitWord::is_prefix_of(const BitWord& other) const noexcept {
  return bits_.size() <= other.bits_.size() &&
         std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

BitWord BitWord::complemented() const { return flipped_from(0); }

BitWord BitWord::flipped_from(std::size_t from) const {
  BitWord w = *this;
  for (std::size_t i = from; i < w.bits_.size(); ++i) w.bits_[i] ^= 1U;
  return w;
}

std::uint64_t BitWord::to_index() const {
  if (bits_.size() > 63) throw Error(ErrorKind::BadLength, "word too long for a cell index");
  std::uint64_t idx = 0;
  for (auto b : bits_) idx = (idx << 1) | b;
  return idx;
}

std::string BitWord::str() const {
  if (bits_.empty()) return std::string(kEmptyGlyph);
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

bool length_lex_less(const BitWord& a, const BitWord& b) noexcept {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

BitWord word_add(const BitWord& a, const BitWord& b) {
  const BitWord& longer = a.size() >= b.size() ? a : b;
  const BitWord& shorter = a.size() >= b.size() ? b : a;
  BitWord out = longer;
  for (std::size_t i = 0; i < shorter.size(); ++i) out.set(i, longer[i] != shorter[i]);
  return out;
}

BitWord join(const BitWord& a, const BitWord& b) {
  if (!a.comparable(b)) {
    throw Error(ErrorKind::BadLength, "join of incomparable words " + a.str() + ", " + b.str());
  }
  return a.size() >= b.size() ? a : b;
}

std::size_t first_difference(const BitWord& a, const BitWord& b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return i;
  }
  return n;
}

BitWord canonical_cylinder(std::size_t n) {
  // Words of length L occupy indices [2^L - 1, 2^{L+1} - 1).
  unsigned len = 0;
  std::uint64_t start = 0;
  while (n >= start + (std::uint64_t{1} << len)) {
    start += std::uint64_t{1} << len;
    ++len;
  }
  return BitWord::from_index(n - start, len);
}

std::vector<BitWord> all_words(unsigned n) {
  std::vector<BitWord> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) out.push_back(BitWord::from_index(i, n));
  return out;
}

}  // namespace cantor
