#include "cantor/trees.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "cantor/errors.hpp"

namespace cantor {

std::vector<BitWord> TreePrefix::level(unsigned n) const {
  std::vector<BitWord> out;
  for (const auto& w : nodes) {
    if (w.size() == n) out.push_back(w);
  }
  return out;
}

bool TreePrefix::is_downward_closed() const {
  for (const auto& w : nodes) {
    if (w.size() > depth) return false;
    if (!w.empty() && !contains(w.prefix(w.size() - 1))) return false;
  }
  return true;
}

std::vector<BitWord> TreeSkeleton::addresses_at(unsigned level) const {
  std::vector<BitWord> out;
  if (stems.empty()) return out;
  // Address length per level is uniform; find it from the label form.
  const bool interleaved = labels.has_value();
  const std::size_t len = interleaved ? 2 * level + 1 : level;
  for (const auto& [addr, stem] : stems) {
    if (addr.size() == len) out.push_back(addr);
  }
  return out;
}

std::vector<BitWord> TreeSkeleton::stems_at(unsigned level) const {
  std::vector<BitWord> out;
  for (const auto& a : addresses_at(level)) out.push_back(stems.at(a));
  return out;
}

std::string tree_kind_name(TreeKind kind) {
  switch (kind) {
    case TreeKind::Perfect: return "perfect";
    case TreeKind::UniformlyPerfect: return "uniformly-perfect";
    case TreeKind::Silver: return "silver";
    case TreeKind::Spinas: return "spinas";
  }
  return "perfect";
}

TreeKind parse_tree_kind(const std::string& text) {
  for (auto k : {TreeKind::Perfect, TreeKind::UniformlyPerfect, TreeKind::Silver, TreeKind::Spinas}) {
    if (tree_kind_name(k) == text) return k;
  }
  throw Error(ErrorKind::ParseError, "unknown tree kind '" + text + "'");
}

TreePrefix downward_closure(const std::vector<BitWord>& words) {
  TreePrefix t;
  for (const auto& w : words) {
    t.depth = std::max(t.depth, static_cast<unsigned>(w.size()));
    for (std::size_t n = 0; n <= w.size(); ++n) t.nodes.insert(w.prefix(n));
  }
  return t;
}

TreePrefix downward_closure(const TreeSkeleton& skeleton) {
  std::vector<BitWord> words;
  for (const auto& [addr, stem] : skeleton.stems) words.push_back(stem);
  return downward_closure(words);
}

ClopenSet body_at_depth(const TreePrefix& t, unsigned n) {
  if (n > t.depth) {
    throw Error(ErrorKind::BadLength, "body depth " + std::to_string(n) + " exceeds prefix depth " +
                                          std::to_string(t.depth));
  }
  ClopenSet out(1, n);
  for (const auto& w : t.level(n)) out.insert(w);
  return out;
}

namespace {

TreeVerdict violated(const BitWord& node, std::string reason) {
  TreeVerdict v;
  v.consistent = false;
  v.node = node;
  v.reason = std::move(reason);
  return v;
}

TreeVerdict consistent(TreeWitness w = {}) {
  TreeVerdict v;
  v.consistent = true;
  v.witness = std::move(w);
  return v;
}

std::optional<TreeVerdict> dead_node(const TreePrefix& t) {
  for (const auto& w : t.nodes) {
    if (w.size() < t.depth && !t.contains(w.appended(false)) && !t.contains(w.appended(true))) {
      return violated(w, "node has no extension below depth " + std::to_string(t.depth));
    }
  }
  return std::nullopt;
}

/// Lengths at which some node splits.
std::vector<bool> split_levels(const TreePrefix& t) {
  std::vector<bool> out(t.depth, false);
  for (const auto& w : t.nodes) {
    if (w.size() < t.depth && t.splits(w)) out[w.size()] = true;
  }
  return out;
}

/// Every node at a splitting length splits.
std::optional<TreeVerdict> level_uniformity(const TreePrefix& t, const std::vector<bool>& must_split) {
  for (const auto& w : t.nodes) {
    if (w.size() < t.depth && must_split[w.size()] && !t.splits(w)) {
      return violated(w, "another node of length " + std::to_string(w.size()) + " splits but this one does not");
    }
  }
  return std::nullopt;
}

TreeVerdict classify_silver(const TreePrefix& t, const TreeWitness& witness) {
  if (auto d = dead_node(t)) return *d;
  std::vector<bool> in_a(t.depth, false);
  BitWord pattern = BitWord::zeros(t.depth);
  const auto* given = std::get_if<SilverWitness>(&witness);
  if (given != nullptr) {
    if (given->pattern.size() < t.depth) {
      throw Error(ErrorKind::BadWitness, "silver pattern shorter than depth " + std::to_string(t.depth));
    }
    for (unsigned p : given->free_positions) {
      if (p >= t.depth) throw Error(ErrorKind::BadWitness, "free position " + std::to_string(p) + " beyond depth");
      in_a[p] = true;
    }
    pattern = given->pattern;
  } else {
    in_a = split_levels(t);
    // Off A, the pattern takes the bit every node carries; conflicts surface below.
    for (unsigned n = 0; n < t.depth; ++n) {
      if (in_a[n]) continue;
      for (const auto& w : t.level(n + 1)) {
        pattern.set(n, w[n]);
        break;
      }
    }
  }
  if (auto v = level_uniformity(t, in_a)) return *v;
  for (const auto& w : t.nodes) {
    for (std::size_t n = 0; n < w.size(); ++n) {
      if (!in_a[n] && w[n] != pattern[n]) {
        return violated(w, "bit " + std::to_string(n) + " disagrees with the pattern off the free positions");
      }
    }
  }
  SilverWitness out;
  out.pattern = pattern.prefix(t.depth);
  for (unsigned n = 0; n < t.depth; ++n) {
    if (in_a[n]) out.free_positions.push_back(n);
  }
  return consistent(out);
}

/// Some extension of `node` of length n+1 carries bit i at position n.
bool realizes(const TreePrefix& t, const BitWord& node, unsigned n, bool i) {
  for (const auto& w : t.level(n + 1)) {
    if (node.is_prefix_of(w) && w[n] == i) return true;
  }
  return false;
}

TreeVerdict classify_spinas(const TreePrefix& t, const TreeWitness& witness) {
  if (auto d = dead_node(t)) return *d;
  const auto* given = std::get_if<SpinasWitness>(&witness);
  if (given != nullptr) {
    for (const auto& w : t.nodes) {
      auto it = given->bound.find(w);
      if (it == given->bound.end()) throw Error(ErrorKind::BadWitness, "no bound for node " + w.str());
      for (unsigned n = it->second; n < t.depth; ++n) {
        for (bool i : {false, true}) {
          if (!realizes(t, w, n, i)) {
            return violated(w, "bit value " + std::to_string(i) + " not realized at position " + std::to_string(n));
          }
        }
      }
    }
    return consistent(*given);
  }
  SpinasWitness out;
  for (const auto& w : t.nodes) {
    unsigned bound = t.depth;
    while (bound > 0 && realizes(t, w, bound - 1, false) && realizes(t, w, bound - 1, true)) --bound;
    out.bound[w] = bound;
  }
  return consistent(out);
}

}  // namespace

TreeVerdict classify_prefix(const TreePrefix& t, TreeKind kind, const TreeWitness& witness) {
  if (!t.is_downward_closed()) throw Error(ErrorKind::BadWitness, "prefix is not downward closed");
  switch (kind) {
    case TreeKind::Perfect: {
      if (auto d = dead_node(t)) return *d;
      return consistent();
    }
    case TreeKind::UniformlyPerfect: {
      if (auto d = dead_node(t)) return *d;
      if (auto v = level_uniformity(t, split_levels(t))) return *v;
      return consistent();
    }
    case TreeKind::Silver: return classify_silver(t, witness);
    case TreeKind::Spinas: return classify_spinas(t, witness);
  }
  return consistent();
}

TreeSkeleton extract_silver_subtree(const TreeSkeleton& skeleton) {
  if (!skeleton.labels) throw Error(ErrorKind::MissingLabels, "skeleton carries no (i, j) labels");
  TreeSkeleton out;
  out.levels = skeleton.levels;
  for (const auto& [addr, label] : *skeleton.labels) {
    if (label.j != BitWord::zeros(label.j.size())) continue;
    auto it = skeleton.stems.find(addr);
    if (it == skeleton.stems.end()) throw Error(ErrorKind::MissingLabels, "label without stem at " + addr.str());
    out.stems[label.i] = it->second;
  }
  return out;
}

namespace {

std::vector<unsigned> parse_positions(const std::string& text) {
  std::vector<unsigned> out;
  if (text.empty() || text == "-") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || item.size() > 9) {
      throw Error(ErrorKind::ParseError, "bad position list '" + text + "'");
    }
    out.push_back(static_cast<unsigned>(std::stoul(item)));
  }
  return out;
}

unsigned parse_natural(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos || text.size() > 9) {
    throw Error(ErrorKind::ParseError, "expected a natural number, got '" + text + "'");
  }
  return static_cast<unsigned>(std::stoul(text));
}

}  // namespace

TreeFile read_tree(std::istream& in) {
  TreeFile file;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "empty tree file");
  {
    std::istringstream head(line);
    std::string tag, depth, extra;
    if (!(head >> tag >> depth) || tag != "tree" || (head >> extra)) {
      throw Error(ErrorKind::ParseError, "expected 'tree <depth>' header");
    }
    file.prefix.depth = parse_natural(depth);
  }
  SpinasWitness spinas;
  bool have_spinas = false;
  unsigned lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    const std::string where = " (line " + std::to_string(lineno) + ")";
    if (first == "silver") {
      std::string t, a, extra;
      if (!(ls >> t)) throw Error(ErrorKind::ParseError, "silver line needs a pattern" + where);
      ls >> a;
      if (ls >> extra) throw Error(ErrorKind::ParseError, "trailing tokens" + where);
      file.witness = SilverWitness{BitWord(t), parse_positions(a)};
    } else if (first == "spinas") {
      std::string entry, extra;
      if (!(ls >> entry) || (ls >> extra)) throw Error(ErrorKind::ParseError, "expected 'spinas <node>=<N>'" + where);
      const auto eq = entry.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "expected 'spinas <node>=<N>'" + where);
      spinas.bound[BitWord(entry.substr(0, eq))] = parse_natural(entry.substr(eq + 1));
      have_spinas = true;
    } else {
      std::string extra;
      if (ls >> extra) throw Error(ErrorKind::ParseError, "trailing tokens" + where);
      BitWord w(first);
      if (w.size() > file.prefix.depth) throw Error(ErrorKind::ParseError, "node longer than depth" + where);
      file.prefix.nodes.insert(w);
    }
  }
  if (have_spinas) {
    if (std::holds_alternative<SilverWitness>(file.witness)) {
      throw Error(ErrorKind::ParseError, "both silver and spinas witnesses given");
    }
    file.witness = spinas;
  }
  if (!file.prefix.is_downward_closed()) throw Error(ErrorKind::ParseError, "tree is not downward closed");
  return file;
}

void write_tree(std::ostream& out, const TreePrefix& t, const TreeWitness& witness) {
  out << "tree " << t.depth << '\n';
  std::vector<BitWord> nodes(t.nodes.begin(), t.nodes.end());
  std::sort(nodes.begin(), nodes.end(), length_lex_less);
  for (const auto& w : nodes) out << w.str() << '\n';
  if (const auto* s = std::get_if<SilverWitness>(&witness)) {
    out << "silver " << s->pattern.str() << ' ';
    if (s->free_positions.empty()) out << '-';
    for (std::size_t k = 0; k < s->free_positions.size(); ++k) out << (k ? "," : "") << s->free_positions[k];
    out << '\n';
  } else if (const auto* p = std::get_if<SpinasWitness>(&witness)) {
    for (const auto& [node, bound] : p->bound) out << "spinas " << node.str() << '=' << bound << '\n';
  }
}

}  // namespace cantor
