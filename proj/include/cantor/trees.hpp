#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cantor/bitword.hpp"
#include "cantor/clopen.hpp"

namespace cantor {

/// Downward-closed set of nodes of length <= depth.
struct TreePrefix {
  unsigned depth = 0;
  std::set<BitWord> nodes;

  bool contains(const BitWord& w) const { return nodes.count(w) != 0; }
  /// Both one-bit extensions present.
  bool splits(const BitWord& w) const { return contains(w.appended(false)) && contains(w.appended(true)); }
  std::vector<BitWord> level(unsigned n) const;
  bool is_downward_closed() const;
};

/// Per-branch (i, j) indices of the complement-twin construction.
struct BranchLabel {
  BitWord i;
  BitWord j;
  friend bool operator==(const BranchLabel&, const BranchLabel&) = default;
};

/// Stems σ_τ keyed by address τ. Addresses at level n all have the same length;
/// for the plain constructions that length is n.
struct TreeSkeleton {
  unsigned levels = 0;
  std::map<BitWord, BitWord> stems;
  std::optional<std::map<BitWord, BranchLabel>> labels;

  /// Stems whose address sits at `level`, in address order.
  std::vector<BitWord> stems_at(unsigned level) const;
  std::vector<BitWord> addresses_at(unsigned level) const;
  friend bool operator==(const TreeSkeleton&, const TreeSkeleton&) = default;
};

struct SilverWitness {
  BitWord pattern;
  std::vector<unsigned> free_positions;
  friend bool operator==(const SilverWitness&, const SilverWitness&) = default;
};

struct SpinasWitness {
  std::map<BitWord, unsigned> bound;
  friend bool operator==(const SpinasWitness&, const SpinasWitness&) = default;
};

using TreeWitness = std::variant<std::monostate, SilverWitness, SpinasWitness>;

enum class TreeKind { Perfect, UniformlyPerfect, Silver, Spinas };
std::string tree_kind_name(TreeKind kind);
/// Accepts perfect, uniformly-perfect, silver, spinas.
TreeKind parse_tree_kind(const std::string& text);

struct TreeVerdict {
  bool consistent = false;
  TreeWitness witness;
  /// Set when violated.
  BitWord node;
  std::string reason;
};

TreePrefix downward_closure(const std::vector<BitWord>& words);
TreePrefix downward_closure(const TreeSkeleton& skeleton);

/// Nodes of length n as a dim-1 clopen set at depth n.
ClopenSet body_at_depth(const TreePrefix& t, unsigned n);

/// Bounded-depth consistency check. Nodes of length depth are leaves; a node
/// shorter than depth without children is a violation for every kind.
TreeVerdict classify_prefix(const TreePrefix& t, TreeKind kind, const TreeWitness& witness = {});

/// Keeps the branches whose complement choices are all 0, re-keyed by i.
TreeSkeleton extract_silver_subtree(const TreeSkeleton& skeleton);

struct TreeFile {
  TreePrefix prefix;
  TreeWitness witness;
};
TreeFile read_tree(std::istream& in);
void write_tree(std::ostream& out, const TreePrefix& t, const TreeWitness& witness = {});

}  // namespace cantor
