#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cantor {

/// A finite 0/1 sequence: a node of the full binary tree, a cylinder address,
/// or a stem. The empty word is valid and prints as "∅".
class BitWord {
 public:
  BitWord() = default;

  /// Parses "0101"; "∅" and "-" denote the empty word.
  explicit BitWord(std::string_view text);

  static BitWord zeros(std::size_t n);
  static BitWord ones(std::size_t n);
  /// The word of length `len` whose bits spell `index` most significant first,
  /// so numeric order on indices is lexicographic order on words.
  static BitWord from_index(std::uint64_t index, unsigned len);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  bool at(std::size_t i) const;

  void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
  void set(std::size_t i, bool bit) { bits_.at(i) = bit ? 1 : 0; }

  BitWord prefix(std::size_t n) const;
  BitWord suffix_from(std::size_t n) const;
  BitWord concat(const BitWord& tail) const;
  BitWord appended(bool bit) const;
  /// Pads with zeros (or truncates) to exactly `n` bits.
  BitWord resized(std::size_t n) const;

  bool is_prefix_of(const BitWord& other) const noexcept;
  bool comparable(const BitWord& other) const noexcept {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }
  bool incomparable(const BitWord& other) const noexcept { return !comparable(other); }

  BitWord complemented() const;
  /// Complements every bit at position >= from.
  BitWord flipped_from(std::size_t from) const;

  /// Index for `from_index`; requires size() <= 63.
  std::uint64_t to_index() const;

  std::string str() const;

  friend bool operator==(const BitWord&, const BitWord&) = default;
  /// Lexicographic order; a proper prefix sorts first.
  friend std::strong_ordering operator<=>(const BitWord& a, const BitWord& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
};

/// Length first, then lexicographic: ∅, 0, 1, 00, 01, ...
bool length_lex_less(const BitWord& a, const BitWord& b) noexcept;

/// Coordinatewise sum mod 2 on the overlap; the tail of the longer word is copied.
BitWord word_add(const BitWord& a, const BitWord& b);

/// The longer of two comparable words. Precondition: a.comparable(b).
BitWord join(const BitWord& a, const BitWord& b);

/// Position of the first disagreement, or min length when one is a prefix of the other.
std::size_t first_difference(const BitWord& a, const BitWord& b) noexcept;

/// The n-th word in length-lexicographic order: 0 -> ∅, 1 -> 0, 2 -> 1, 3 -> 00, ...
BitWord canonical_cylinder(std::size_t n);

/// All words of length n in lexicographic order.
std::vector<BitWord> all_words(unsigned n);

}  // namespace cantor
