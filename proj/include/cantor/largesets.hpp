#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cantor/bitword.hpp"
#include "cantor/clopen.hpp"
#include "cantor/dyadic.hpp"

namespace cantor {

struct Rect {
  BitWord a;
  BitWord b;
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Shorter rectangles first (by max side length), then lexicographic on (a, b).
bool rect_order(const Rect& x, const Rect& y);

/// Finite presentation of a descending sequence of open sets U_0, U_1, ...
/// Level n is the union of its rectangles, scanned in stored order.
struct DenseOpenFamily {
  std::vector<std::vector<Rect>> levels;
  bool descending = false;

  std::size_t count() const noexcept { return levels.size(); }
  /// Longest generator word over all levels.
  unsigned resolution() const;
  /// U_n as a dim-2 clopen set at depth max(resolution(), min_depth).
  ClopenSet level_set(std::size_t n, unsigned min_depth = 0) const;
};

/// extend(n, σ, ρ) returns (σ' ⊇ σ, ρ' ⊇ ρ) with [σ']×[ρ'] ⊆ U_n.
class ExtensionOracle {
 public:
  virtual ~ExtensionOracle() = default;
  virtual std::pair<BitWord, BitWord> extend(std::size_t n, const BitWord& sigma, const BitWord& rho) const = 0;
  virtual std::size_t levels() const = 0;
  /// Content hash of the underlying instance; empty when there is none.
  virtual std::string instance_digest() const { return {}; }
};

/// First generator (a, b) of U_n with a ~ σ and b ~ ρ (comparable) answers
/// (σ ∨ a, ρ ∨ b). Throws DensityExhausted when none matches.
class FamilyOracle final : public ExtensionOracle {
 public:
  explicit FamilyOracle(const DenseOpenFamily& family);
  std::pair<BitWord, BitWord> extend(std::size_t n, const BitWord& sigma, const BitWord& rho) const override;
  std::size_t levels() const override { return family_->count(); }
  std::string instance_digest() const override { return digest_; }
  const DenseOpenFamily& family() const noexcept { return *family_; }

 private:
  const DenseOpenFamily* family_;
  std::string digest_;
};

std::unique_ptr<ExtensionOracle> oracle_from_family(const DenseOpenFamily& family);

/// Extend, complement the first coordinate from `from` on, extend again, undo
/// the complement: the answer and its flip both lie in U_n.
std::pair<BitWord, BitWord> flip_symmetrized_extend(const ExtensionOracle& oracle, std::size_t n,
                                                    const BitWord& sigma, const BitWord& rho, unsigned from);

/// F_0 ⊆ F_1 ⊆ ... as dim-2 clopen sets at one common depth.
class Filtration {
 public:
  Filtration() = default;
  /// Refines every set to the common depth; throws PreconditionFailed unless ascending.
  explicit Filtration(std::vector<ClopenSet> sets);

  std::size_t size() const noexcept { return sets_.size(); }
  unsigned depth() const noexcept { return depth_; }
  const ClopenSet& operator[](std::size_t n) const { return sets_.at(n); }
  const Dyadic& measure(std::size_t n) const { return measures_.at(n); }

 private:
  std::vector<ClopenSet> sets_;
  std::vector<Dyadic> measures_;
  unsigned depth_ = 0;
};

/// Maximal dyadic squares of a dim-2 set, in rect_order.
std::vector<Rect> quadtree_decomposition(const ClopenSet& set);
/// Maximal cylinders of a dim-1 set, in length-lex order.
std::vector<BitWord> cylinder_decomposition(const ClopenSet& set);

/// Every level is the complement of the depth-q diagonal cells.
DenseOpenFamily codiagonal_family(unsigned q, std::size_t count);
/// Every level is the full plane.
DenseOpenFamily full_family(std::size_t count);

struct DenseOpenParams {
  unsigned depth = 12;
  std::size_t count = 6;
  std::size_t knockouts_per_level = 4;
};
/// U_n = U_{n-1} minus fresh random depth-d cells.
DenseOpenFamily random_dense_open(std::uint64_t seed, const DenseOpenParams& params);

struct FiltrationParams {
  unsigned depth = 6;
  /// λ(F_n) = 1 - 2^{-(2n+c)} while the knockout count stays positive.
  unsigned c = 6;
};
/// Nested knockout sets K_0 ⊇ K_1 ⊇ ... with |K_n| = floor(2^{2d-2n-c}); the
/// last set is the full plane.
Filtration random_filtration(std::uint64_t seed, const FiltrationParams& params);

DenseOpenFamily read_dof(std::istream& in);
void write_dof(std::ostream& out, const DenseOpenFamily& family);
Filtration read_filt(std::istream& in);
void write_filt(std::ostream& out, const Filtration& filt);
ClopenSet read_cset(std::istream& in);
void write_cset(std::ostream& out, const ClopenSet& set);

/// "sha256:<hex>" of the canonical serialization.
std::string sha256_hex(const std::string& bytes);
std::string instance_digest(const DenseOpenFamily& family);
std::string instance_digest(const Filtration& filt);

}  // namespace cantor
