#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cantor/bitword.hpp"
#include "cantor/dyadic.hpp"

namespace cantor {

/// Largest depth a ClopenSet may have, per dimension. Defaults 16 (dim 1) and
/// 12 (dim 2); CANTOR_DEPTH_CAP="a" or "a,b" overrides them for the process.
struct DepthCaps {
  unsigned dim1 = 16;
  unsigned dim2 = 12;
  unsigned for_dim(int dim) const { return dim == 1 ? dim1 : dim2; }
};
const DepthCaps& depth_caps();
/// Parses a CANTOR_DEPTH_CAP value; throws ParseError.
DepthCaps parse_depth_caps(const std::string& text);

enum class Axis { Vertical, Horizontal };
enum class BoolOp { Union, Intersect, Difference, Complement };

/// Exact clopen subset of 2^ω (dim 1) or 2^ω×2^ω (dim 2) presented as a set of
/// cells at an explicit depth d. A dim-1 cell is a word of length d, a dim-2
/// cell a pair of such words. Cells are stored as a bitmap indexed by the cell
/// word (dim 1) or by (u << d) | v (dim 2), so index order is lexicographic.
class ClopenSet {
 public:
  ClopenSet() : ClopenSet(1, 0) {}
  /// Empty set. Throws DepthCapExceeded past the configured cap.
  ClopenSet(int dim, unsigned depth);

  static ClopenSet empty(int dim, unsigned depth) { return {dim, depth}; }
  static ClopenSet full(int dim, unsigned depth);
  /// [w] at depth max(depth, |w|).
  static ClopenSet cylinder(const BitWord& w, unsigned depth = 0);
  /// [a]×[b] at depth max(depth, |a|, |b|).
  static ClopenSet rectangle(const BitWord& a, const BitWord& b, unsigned depth = 0);
  /// Δ at depth d: the cells (w, w).
  static ClopenSet diagonal(unsigned depth);

  int dim() const noexcept { return dim_; }
  unsigned depth() const noexcept { return depth_; }
  std::uint64_t cell_count() const noexcept { return std::uint64_t{1} << (dim_ * depth_); }

  // Building. Words must have length exactly depth() unless noted.
  void insert_cell(std::uint64_t index);
  void erase_cell(std::uint64_t index);
  void insert(const BitWord& w);
  void insert(const BitWord& u, const BitWord& v);
  /// Adds [w] (|w| <= depth).
  void insert_cylinder(const BitWord& w);
  /// Adds [a]×[b] (|a|, |b| <= depth).
  void insert_rectangle(const BitWord& a, const BitWord& b);

  bool contains_cell(std::uint64_t index) const;
  bool contains(const BitWord& w) const;
  bool contains(const BitWord& u, const BitWord& v) const;

  /// [w] ⊆ this, for any |w| (longer words are resolved by their depth-d cell).
  bool contains_cylinder(const BitWord& w) const;
  /// [a]×[b] ⊆ this, for any |a|, |b|.
  bool contains_rectangle(const BitWord& a, const BitWord& b) const;
  /// λ(this ∩ [w]) exactly.
  Dyadic measure_in_cylinder(const BitWord& w) const;
  /// λ(this ∩ [a]×[b]) exactly.
  Dyadic measure_in_rectangle(const BitWord& a, const BitWord& b) const;

  std::uint64_t count() const;
  Dyadic measure() const { return Dyadic(BigInt(count()), static_cast<unsigned>(dim_) * depth_); }
  bool is_empty() const { return count() == 0; }

  ClopenSet refined(unsigned new_depth) const;
  bool subset_of(const ClopenSet& other) const;

  std::vector<std::uint64_t> cell_indices() const;
  std::vector<BitWord> cells1() const;
  std::vector<std::pair<BitWord, BitWord>> cells2() const;
  std::optional<std::uint64_t> first_cell() const;

  /// Set equality: compares at the common depth.
  friend bool operator==(const ClopenSet& a, const ClopenSet& b);

  const std::vector<std::uint64_t>& raw_bits() const noexcept { return bits_; }

 private:
  void check_dim(int dim, const char* op) const;
  void set_range(std::uint64_t lo, std::uint64_t hi);
  bool all_in_range(std::uint64_t lo, std::uint64_t hi) const;
  std::uint64_t count_range(std::uint64_t lo, std::uint64_t hi) const;
  /// Index range [lo, hi) of depth-d words extending w (w truncated to depth).
  std::pair<std::uint64_t, std::uint64_t> word_range(const BitWord& w) const;

  friend ClopenSet boolean_combine(BoolOp, const ClopenSet&, const ClopenSet*);

  int dim_;
  unsigned depth_;
  std::vector<std::uint64_t> bits_;
};

/// Set algebra after refining both operands to their common depth.
/// Complement ignores `b`. Throws DimensionMismatch.
ClopenSet boolean_combine(BoolOp op, const ClopenSet& a, const ClopenSet* b = nullptr);
inline ClopenSet set_union(const ClopenSet& a, const ClopenSet& b) { return boolean_combine(BoolOp::Union, a, &b); }
inline ClopenSet set_intersect(const ClopenSet& a, const ClopenSet& b) { return boolean_combine(BoolOp::Intersect, a, &b); }
inline ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b) { return boolean_combine(BoolOp::Difference, a, &b); }
inline ClopenSet set_complement(const ClopenSet& a) { return boolean_combine(BoolOp::Complement, a); }

/// A + s for dim 1 (refines A to |s| first if needed).
ClopenSet translate(const ClopenSet& a, const BitWord& s);
/// A + (s, t) for dim 2, coordinates translated independently.
ClopenSet translate(const ClopenSet& a, const BitWord& s, const BitWord& t);

/// Vertical section {y : (w, y) ∈ A} or horizontal {x : (x, w) ∈ A}; |w| = depth.
ClopenSet section(const ClopenSet& a, const BitWord& w, Axis axis = Axis::Vertical);

/// A^{-1} = {(y, x) : (x, y) ∈ A}.
ClopenSet swap_coordinates(const ClopenSet& a);
/// A ∩ A^{-1}.
ClopenSet symmetrize(const ClopenSet& a);
/// Complements bits at positions >= from in the first coordinate.
ClopenSet flip_first_coordinate(const ClopenSet& a, unsigned from);

}  // namespace cantor
