#include "cantor/largesets.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "cantor/errors.hpp"

namespace cantor {

bool rect_order(const Rect& x, const Rect& y) {
  const auto lx = std::max(x.a.size(), x.b.size());
  const auto ly = std::max(y.a.size(), y.b.size());
  if (lx != ly) return lx < ly;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

unsigned DenseOpenFamily::resolution() const {
  std::size_t r = 0;
  for (const auto& level : levels) {
    for (const auto& g : level) r = std::max({r, g.a.size(), g.b.size()});
  }
  return static_cast<unsigned>(r);
}

ClopenSet DenseOpenFamily::level_set(std::size_t n, unsigned min_depth) const {
  if (n >= levels.size()) {
    throw Error(ErrorKind::BadLength, "level " + std::to_string(n) + " not in a family of " +
                                          std::to_string(levels.size()));
  }
  ClopenSet out(2, std::max(resolution(), min_depth));
  for (const auto& g : levels[n]) out.insert_rectangle(g.a, g.b);
  return out;
}

FamilyOracle::FamilyOracle(const DenseOpenFamily& family) : family_(&family), digest_(cantor::instance_digest(family)) {}

std::pair<BitWord, BitWord> FamilyOracle::extend(std::size_t n, const BitWord& sigma, const BitWord& rho) const {
  if (n >= family_->count()) {
    throw Error(ErrorKind::DensityExhausted, "no level " + std::to_string(n) + " in the family");
  }
  for (const auto& g : family_->levels[n]) {
    if (g.a.comparable(sigma) && g.b.comparable(rho)) return {join(sigma, g.a), join(rho, g.b)};
  }
  throw Error(ErrorKind::DensityExhausted,
              "level " + std::to_string(n) + " has no generator meeting " + sigma.str() + " x " + rho.str());
}

std::unique_ptr<ExtensionOracle> oracle_from_family(const DenseOpenFamily& family) {
  return std::make_unique<FamilyOracle>(family);
}

std::pair<BitWord, BitWord> flip_symmetrized_extend(const ExtensionOracle& oracle, std::size_t n,
                                                    const BitWord& sigma, const BitWord& rho, unsigned from) {
  if (from > sigma.size()) throw Error(ErrorKind::BadLength, "flip position beyond the query word");
  auto [s1, r1] = oracle.extend(n, sigma, rho);
  auto [s2, r2] = oracle.extend(n, s1.flipped_from(from), r1);
  return {s2.flipped_from(from), r2};
}

Filtration::Filtration(std::vector<ClopenSet> sets) {
  for (const auto& s : sets) {
    if (s.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "filtration sets must be planar");
    depth_ = std::max(depth_, s.depth());
  }
  for (auto& s : sets) {
    sets_.push_back(s.refined(depth_));
    measures_.push_back(sets_.back().measure());
  }
  for (std::size_t n = 1; n < sets_.size(); ++n) {
    if (!sets_[n - 1].subset_of(sets_[n])) {
      throw Error(ErrorKind::PreconditionFailed, "F_" + std::to_string(n - 1) + " is not contained in F_" +
                                                     std::to_string(n));
    }
  }
}

std::vector<Rect> quadtree_decomposition(const ClopenSet& set) {
  if (set.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "quadtree decomposition needs dim 2");
  std::vector<Rect> out;
  std::vector<Rect> mixed{{BitWord(), BitWord()}};
  for (unsigned len = 0; len <= set.depth() && !mixed.empty(); ++len) {
    std::vector<Rect> next;
    for (const auto& sq : mixed) {
      const Dyadic m = set.measure_in_rectangle(sq.a, sq.b);
      if (m.is_zero()) continue;
      if (m == Dyadic::unit(2 * len)) {
        out.push_back(sq);
        continue;
      }
      for (bool x : {false, true}) {
        for (bool y : {false, true}) next.push_back({sq.a.appended(x), sq.b.appended(y)});
      }
    }
    mixed = std::move(next);
  }
  std::sort(out.begin(), out.end(), rect_order);
  return out;
}

std::vector<BitWord> cylinder_decomposition(const ClopenSet& set) {
  if (set.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "cylinder decomposition needs dim 1");
  std::vector<BitWord> out;
  std::vector<BitWord> mixed{BitWord()};
  for (unsigned len = 0; len <= set.depth() && !mixed.empty(); ++len) {
    std::vector<BitWord> next;
    for (const auto& w : mixed) {
      const Dyadic m = set.measure_in_cylinder(w);
      if (m.is_zero()) continue;
      if (m == Dyadic::unit(len)) {
        out.push_back(w);
        continue;
      }
      next.push_back(w.appended(false));
      next.push_back(w.appended(true));
    }
    mixed = std::move(next);
  }
  std::sort(out.begin(), out.end(), length_lex_less);
  return out;
}

DenseOpenFamily codiagonal_family(unsigned q, std::size_t count) {
  std::vector<Rect> gens;
  for (unsigned len = 1; len <= q; ++len) {
    for (const auto& w : all_words(len - 1)) {
      gens.push_back({w.appended(false), w.appended(true)});
      gens.push_back({w.appended(true), w.appended(false)});
    }
  }
  std::sort(gens.begin(), gens.end(), rect_order);
  DenseOpenFamily fam;
  fam.descending = true;
  fam.levels.assign(count, gens);
  return fam;
}

DenseOpenFamily full_family(std::size_t count) {
  DenseOpenFamily fam;
  fam.descending = true;
  fam.levels.assign(count, std::vector<Rect>{{BitWord(), BitWord()}});
  return fam;
}

DenseOpenFamily random_dense_open(std::uint64_t seed, const DenseOpenParams& params) {
  const unsigned d = params.depth;
  if (d > depth_caps().dim2) {
    throw Error(ErrorKind::InfeasibleParams, "depth " + std::to_string(d) + " exceeds the planar cap");
  }
  const std::uint64_t cells = std::uint64_t{1} << (2 * d);
  if (params.knockouts_per_level * params.count >= cells) {
    throw Error(ErrorKind::InfeasibleParams, "knockouts would exhaust the " + std::to_string(cells) + " cells");
  }
  std::mt19937_64 rng(seed);
  ClopenSet u = ClopenSet::full(2, d);
  DenseOpenFamily fam;
  fam.descending = true;
  for (std::size_t n = 0; n < params.count; ++n) {
    for (std::size_t k = 0; k < params.knockouts_per_level;) {
      const std::uint64_t c = rng() % cells;
      if (!u.contains_cell(c)) continue;
      u.erase_cell(c);
      ++k;
    }
    fam.levels.push_back(quadtree_decomposition(u));
  }
  return fam;
}

Filtration random_filtration(std::uint64_t seed, const FiltrationParams& params) {
  const unsigned d = params.depth;
  if (d > depth_caps().dim2) {
    throw Error(ErrorKind::InfeasibleParams, "depth " + std::to_string(d) + " exceeds the planar cap");
  }
  if (params.c == 0) throw Error(ErrorKind::InfeasibleParams, "c = 0 would knock out the whole plane");
  std::mt19937_64 rng(seed);
  const std::uint64_t cells = std::uint64_t{1} << (2 * d);
  std::vector<std::uint64_t> knocked;
  if (2 * d >= params.c) {
    // Partial Fisher-Yates over all cells.
    const std::uint64_t k0 = std::uint64_t{1} << (2 * d - params.c);
    std::vector<std::uint64_t> pool(cells);
    for (std::uint64_t i = 0; i < cells; ++i) pool[i] = i;
    for (std::uint64_t i = 0; i < k0; ++i) {
      const std::uint64_t j = i + rng() % (cells - i);
      std::swap(pool[i], pool[j]);
    }
    knocked.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k0));
  }
  std::vector<ClopenSet> sets;
  for (unsigned n = 0;; ++n) {
    ClopenSet f = ClopenSet::full(2, d);
    for (auto c : knocked) f.erase_cell(c);
    sets.push_back(std::move(f));
    if (knocked.empty()) break;
    const unsigned shift = 2 * (n + 1) + params.c;
    const std::uint64_t next = shift > 2 * d ? 0 : std::uint64_t{1} << (2 * d - shift);
    for (std::uint64_t i = 0; i < next; ++i) {
      const std::uint64_t j = i + rng() % (knocked.size() - i);
      std::swap(knocked[i], knocked[j]);
    }
    knocked.resize(next);
  }
  return Filtration(std::move(sets));
}

namespace {

struct LineReader {
  std::istream& in;
  unsigned lineno = 0;

  /// Next non-blank, non-comment line split into tokens; false at EOF.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ls(line);
      tokens.clear();
      std::string t;
      while (ls >> t) tokens.push_back(t);
      if (!tokens.empty() && tokens[0][0] != '#') return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ParseError, msg + " (line " + std::to_string(lineno) + ")");
  }
};

unsigned parse_nat(const std::string& s, const LineReader& r) {
  if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos) {
    r.fail("expected a natural number, got '" + s + "'");
  }
  return static_cast<unsigned>(std::stoul(s));
}

/// Reads `tag <n>` blocks of `r a b` lines; block indices must run 0, 1, ...
std::vector<std::vector<Rect>> read_blocks(LineReader& r, const std::string& tag, std::size_t expected) {
  std::vector<std::vector<Rect>> blocks;
  std::vector<std::string> tok;
  while (r.next(tok)) {
    if (tok[0] == tag) {
      if (tok.size() != 2) r.fail("expected '" + tag + " <n>'");
      if (parse_nat(tok[1], r) != blocks.size()) r.fail("blocks must be numbered 0, 1, ... in order");
      blocks.emplace_back();
    } else if (tok[0] == "r") {
      if (tok.size() != 3) r.fail("expected 'r <word> <word>'");
      if (blocks.empty()) r.fail("rectangle before the first block");
      blocks.back().push_back({BitWord(tok[1]), BitWord(tok[2])});
    } else {
      r.fail("unexpected token '" + tok[0] + "'");
    }
  }
  if (blocks.size() != expected) {
    throw Error(ErrorKind::ParseError, "header declares " + std::to_string(expected) + " blocks, found " +
                                           std::to_string(blocks.size()));
  }
  return blocks;
}

}  // namespace

DenseOpenFamily read_dof(std::istream& in) {
  LineReader r{in};
  std::vector<std::string> tok;
  if (!r.next(tok) || tok[0] != "dof" || tok.size() < 2 || tok.size() > 3) r.fail("expected 'dof <count> [descending]'");
  DenseOpenFamily fam;
  const unsigned count = parse_nat(tok[1], r);
  if (tok.size() == 3) {
    if (tok[2] != "descending") r.fail("unknown flag '" + tok[2] + "'");
    fam.descending = true;
  }
  fam.levels = read_blocks(r, "U", count);
  return fam;
}

void write_dof(std::ostream& out, const DenseOpenFamily& family) {
  out << "dof " << family.count() << (family.descending ? " descending" : "") << '\n';
  for (std::size_t n = 0; n < family.count(); ++n) {
    out << "U " << n << '\n';
    for (const auto& g : family.levels[n]) out << "r " << g.a.str() << ' ' << g.b.str() << '\n';
  }
}

Filtration read_filt(std::istream& in) {
  LineReader r{in};
  std::vector<std::string> tok;
  if (!r.next(tok) || tok.size() != 3 || tok[0] != "filt") r.fail("expected 'filt <m> <depth>'");
  const unsigned m = parse_nat(tok[1], r);
  const unsigned depth = parse_nat(tok[2], r);
  auto blocks = read_blocks(r, "F", std::size_t{m} + 1);
  std::vector<ClopenSet> sets;
  for (const auto& b : blocks) {
    ClopenSet s(2, depth);
    for (const auto& g : b) {
      if (g.a.size() > depth || g.b.size() > depth) {
        throw Error(ErrorKind::ParseError, "rectangle " + g.a.str() + " " + g.b.str() + " deeper than the declared depth");
      }
      s.insert_rectangle(g.a, g.b);
    }
    sets.push_back(std::move(s));
  }
  return Filtration(std::move(sets));
}

void write_filt(std::ostream& out, const Filtration& filt) {
  if (filt.size() == 0) throw Error(ErrorKind::PreconditionFailed, "empty filtration");
  out << "filt " << filt.size() - 1 << ' ' << filt.depth() << '\n';
  for (std::size_t n = 0; n < filt.size(); ++n) {
    out << "F " << n << '\n';
    for (const auto& g : quadtree_decomposition(filt[n])) out << "r " << g.a.str() << ' ' << g.b.str() << '\n';
  }
}

ClopenSet read_cset(std::istream& in) {
  LineReader r{in};
  std::vector<std::string> tok;
  if (!r.next(tok) || tok.size() != 3 || tok[0] != "cset") r.fail("expected 'cset <dim> <depth>'");
  const unsigned dim = parse_nat(tok[1], r);
  if (dim != 1 && dim != 2) r.fail("dimension must be 1 or 2");
  const unsigned depth = parse_nat(tok[2], r);
  ClopenSet s(static_cast<int>(dim), depth);
  while (r.next(tok)) {
    if (dim == 1 && tok[0] == "c" && tok.size() == 2) {
      BitWord w(tok[1]);
      if (w.size() > depth) r.fail("word longer than depth");
      s.insert_cylinder(w);
    } else if (dim == 2 && tok[0] == "r" && tok.size() == 3) {
      BitWord a(tok[1]), b(tok[2]);
      if (a.size() > depth || b.size() > depth) r.fail("word longer than depth");
      s.insert_rectangle(a, b);
    } else {
      r.fail(dim == 1 ? "expected 'c <word>'" : "expected 'r <word> <word>'");
    }
  }
  return s;
}

void write_cset(std::ostream& out, const ClopenSet& set) {
  out << "cset " << set.dim() << ' ' << set.depth() << '\n';
  if (set.dim() == 1) {
    for (const auto& w : cylinder_decomposition(set)) out << "c " << w.str() << '\n';
  } else {
    for (const auto& g : quadtree_decomposition(set)) out << "r " << g.a.str() << ' ' << g.b.str() << '\n';
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::PreconditionFailed, "SHA-256 computation failed");
  }
  std::ostringstream hex;
  hex << "sha256:";
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

std::string instance_digest(const DenseOpenFamily& family) {
  std::ostringstream s;
  write_dof(s, family);
  return sha256_hex(s.str());
}

std::string instance_digest(const Filtration& filt) {
  std::ostringstream s;
  write_filt(s, filt);
  return sha256_hex(s.str());
}

}  // namespace cantor
