#include "cantor/codings.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

Rational weight(const BitWord& w) { return Rational(BigInt(1), BigInt(1) << w.size()); }

Rational total_weight(const std::vector<BitWord>& words) {
  Rational s = 0;
  for (const auto& w : words) s += weight(w);
  return s;
}

[[noreturn]] void malformed(const std::string& detail) { throw Error(ErrorKind::MalformedPresentation, detail); }

bool some_prefix_in(const std::set<BitWord>& gens, const BitWord& w) {
  for (std::size_t i = 0; i <= w.size(); ++i)
    if (gens.count(w.prefix(i))) return true;
  return false;
}

bool meets(const std::vector<BitWord>& gens, const BitWord& sigma) {
  return std::any_of(gens.begin(), gens.end(), [&](const BitWord& g) { return g.comparable(sigma); });
}

std::set<BitWord> dedupe(const std::vector<BitWord>& words) { return {words.begin(), words.end()}; }

void check_lengths(const Presentation& p) {
  auto check = [&](const BitWord& w, const std::string& where) {
    if (w.size() > p.resolution)
      malformed(where + " word " + w.str() + " longer than resolution " + std::to_string(p.resolution));
  };
  for (std::size_t n = 0; n < p.levels.size(); ++n)
    for (const auto& w : p.levels[n]) check(w, "level " + std::to_string(n));
  for (const auto& w : p.words) check(w, "list");
  if (p.ideal == Ideal::MPlus && p.root.size() >= p.resolution && p.resolution > 0)
    malformed("root " + p.root.str() + " not shorter than resolution");
}

// Dense open presentations (M, and M+ below the root): U_n must meet every
// cylinder [σ] with root ⊆ σ and |σ| < R. The code marks every τ with |τ| <= R
// and [τ] ⊆ U_n.
void encode_dense(const Presentation& p, const BitWord& root, Code& code) {
  for (unsigned n = 0; n < p.levels.size(); ++n) {
    const auto& gens = p.levels[n];
    for (unsigned len = static_cast<unsigned>(root.size()); len < p.resolution; ++len)
      for (const auto& tail : all_words(len - static_cast<unsigned>(root.size()))) {
        BitWord sigma = root.concat(tail);
        if (!meets(gens, sigma))
          malformed("level " + std::to_string(n) + " misses the cylinder " + sigma.str());
      }
    std::set<BitWord> g = dedupe(gens);
    for (unsigned len = 0; len <= p.resolution; ++len)
      for (const auto& tau : all_words(len))
        if (some_prefix_in(g, tau)) code.indexed.insert({n, tau});
  }
}

void check_null_levels(const Presentation& p) {
  for (unsigned n = 1; n < p.levels.size(); ++n) {
    auto words = dedupe(p.levels[n]);
    Rational s = total_weight({words.begin(), words.end()});
    if (s >= Rational(1, n))
      malformed("level " + std::to_string(n) + " has weight " + rational_str(s) + " >= 1/" + std::to_string(n));
  }
}

void check_positive_list(const Presentation& p) {
  if (p.k == 0) malformed("k must be positive");
  auto words = dedupe(p.words);
  Rational s = total_weight({words.begin(), words.end()});
  Rational cap = 1 - Rational(1, p.k);
  if (s >= cap) malformed("list weight " + rational_str(s) + " >= 1-1/" + std::to_string(p.k));
}

}  // namespace

std::string ideal_name(Ideal ideal) {
  switch (ideal) {
    case Ideal::M: return "M";
    case Ideal::N: return "N";
    case Ideal::E: return "E";
    case Ideal::MPlus: return "M+";
    case Ideal::NPlus: return "N+";
    case Ideal::EPlus: return "E+";
  }
  return "?";
}

Ideal parse_ideal(const std::string& text) {
  static const std::map<std::string, Ideal> names = {{"M", Ideal::M},      {"N", Ideal::N},
                                                     {"E", Ideal::E},      {"M+", Ideal::MPlus},
                                                     {"N+", Ideal::NPlus}, {"E+", Ideal::EPlus}};
  auto it = names.find(text);
  if (it == names.end()) throw Error(ErrorKind::ParseError, "unknown ideal '" + text + "'");
  return it->second;
}

std::string shape_name(CodeShape shape) {
  switch (shape) {
    case CodeShape::Indexed: return "indexed";
    case CodeShape::Flat: return "flat";
    case CodeShape::Pair: return "pair";
  }
  return "?";
}

CodeShape parse_shape(const std::string& text) {
  if (text == "indexed") return CodeShape::Indexed;
  if (text == "flat") return CodeShape::Flat;
  if (text == "pair") return CodeShape::Pair;
  throw Error(ErrorKind::ParseError, "unknown code shape '" + text + "'");
}

CodeShape shape_for(Ideal ideal) {
  if (ideal == Ideal::NPlus) return CodeShape::Flat;
  if (ideal == Ideal::EPlus) return CodeShape::Pair;
  return CodeShape::Indexed;
}

std::size_t Code::max_length() const {
  std::size_t m = 0;
  for (const auto& [n, w] : indexed) m = std::max(m, w.size());
  for (const auto& w : flat) m = std::max(m, w.size());
  return m;
}

Point Point::parse(const std::string& text) {
  Point p;
  std::string body = text;
  auto open = text.find('(');
  if (open != std::string::npos) {
    if (text.size() != open + 3 || text[open + 2] != ')' || (text[open + 1] != '0' && text[open + 1] != '1'))
      throw Error(ErrorKind::ParseError, "bad point '" + text + "': expected <prefix>(0) or <prefix>(1)");
    p.tail = text[open + 1] == '1';
    body = text.substr(0, open);
  }
  try {
    p.prefix = body.empty() ? BitWord() : BitWord(body);
  } catch (const Error&) {
    throw Error(ErrorKind::ParseError, "bad point '" + text + "'");
  }
  return p;
}

std::string Point::str() const {
  std::string s = prefix.empty() && tail ? "" : prefix.str();
  if (tail) s += *tail ? "(1)" : "(0)";
  return s;
}

std::size_t Point::available() const { return tail ? SIZE_MAX : prefix.size(); }

BitWord Point::restrict(std::size_t m) const {
  if (m <= prefix.size()) return prefix.prefix(m);
  if (!tail)
    throw Error(ErrorKind::InsufficientResolution,
                "point " + str() + " has " + std::to_string(prefix.size()) + " bits, " + std::to_string(m) + " needed");
  BitWord w = prefix;
  while (w.size() < m) w.push_back(*tail);
  return w;
}

std::string status_name(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Refuted: return "refuted";
    case VerdictStatus::UnrefutedAtBound: return "unrefuted-at-bound";
    case VerdictStatus::MemberVerifiedAtBound: return "member-verified-at-bound";
    case VerdictStatus::NonmemberWitness: return "nonmember-witness";
  }
  return "?";
}

std::string describe(const Verdict& v) {
  std::ostringstream out;
  out << status_name(v.status) << " bound=" << v.bound << " search=" << v.search
      << (v.conclusive ? " conclusive" : " bounded");
  const Witness& w = v.witness;
  if (!w.clause.empty()) {
    out << " witness{" << w.clause;
    if (w.n) out << " n=" << *w.n;
    if (w.m) out << " m=" << *w.m;
    if (w.k) out << " k=" << *w.k;
    if (w.rho) out << " rho=" << w.rho->str();
    if (w.sigma) out << " sigma=" << w.sigma->str();
    if (w.tau) out << " tau=" << w.tau->str();
    if (w.value) out << " value=" << rational_str(*w.value);
    out << "}";
  }
  return out.str();
}

Code encode(const Presentation& p) {
  Code code;
  code.ideal = p.ideal;
  code.shape = shape_for(p.ideal);
  check_lengths(p);
  switch (p.ideal) {
    case Ideal::M:
      encode_dense(p, BitWord(), code);
      break;
    case Ideal::MPlus:
      encode_dense(p, p.root, code);
      break;
    case Ideal::N:
      check_null_levels(p);
      for (unsigned n = 0; n < p.levels.size(); ++n)
        for (const auto& w : p.levels[n]) code.indexed.insert({n, w});
      break;
    case Ideal::E: {
      Rational need = p.resolution == 0 ? Rational(0) : 1 - Rational(1, p.resolution);
      for (unsigned n = 0; n < p.levels.size(); ++n) {
        auto words = dedupe(p.levels[n]);
        for (auto a = words.begin(); a != words.end(); ++a)
          for (auto b = std::next(a); b != words.end(); ++b)
            if (a->comparable(*b))
              malformed("level " + std::to_string(n) + " words " + a->str() + " and " + b->str() + " are comparable");
        Rational s = total_weight({words.begin(), words.end()});
        if (s <= need)
          malformed("level " + std::to_string(n) + " has weight " + rational_str(s) + " <= " + rational_str(need));
        for (const auto& w : words) code.indexed.insert({n, w});
      }
      break;
    }
    case Ideal::NPlus:
      check_positive_list(p);
      code.flat = dedupe(p.words);
      break;
    case Ideal::EPlus:
      check_positive_list(p);
      check_null_levels(p);
      code.flat = dedupe(p.words);
      for (unsigned n = 0; n < p.levels.size(); ++n)
        for (const auto& w : p.levels[n]) code.indexed.insert({n, w});
      break;
  }
  // The family conditions above are necessary; the bounded formula at the
  // presentation's own resolution is the full contract.
  unsigned b = p.resolution;
  if (code.shape != CodeShape::Flat && !p.levels.empty())
    b = std::min<unsigned>(b, static_cast<unsigned>(p.levels.size() - 1));
  Verdict v = phi_check(code, b);
  if (v.status == VerdictStatus::Refuted) malformed("encoded table fails its formula: " + describe(v));
  return code;
}

bool direct_member(const Presentation& p, const Point& y) {
  auto in_list = [&](const std::vector<BitWord>& words) {
    return std::any_of(words.begin(), words.end(),
                       [&](const BitWord& w) { return w.size() <= y.available() && y.restrict(w.size()) == w; });
  };
  // Null-type levels start at 1; see first_level in the checker.
  const std::size_t first = p.ideal == Ideal::N || p.ideal == Ideal::EPlus ? 1 : 0;
  auto every_level = [&] {
    return p.levels.size() <= first || std::all_of(p.levels.begin() + static_cast<std::ptrdiff_t>(first),
                                                   p.levels.end(), in_list);
  };
  switch (p.ideal) {
    case Ideal::M:
    case Ideal::E:
      return !every_level();
    case Ideal::N:
    case Ideal::MPlus:
    case Ideal::EPlus:
      return every_level();
    case Ideal::NPlus:
      return !in_list(p.words);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Seeded generators.

namespace {

// Minimal cylinder list for the complement of ⋃[knock], every word <= R.
void complement_cover(const std::vector<BitWord>& knock, const BitWord& sigma, std::vector<BitWord>& out) {
  bool inside = false;
  bool touches = false;
  for (const auto& k : knock) {
    if (k.is_prefix_of(sigma)) inside = true;
    else if (sigma.is_prefix_of(k)) touches = true;
  }
  if (inside) return;
  if (!touches) {
    out.push_back(sigma);
    return;
  }
  complement_cover(knock, sigma.appended(false), out);
  complement_cover(knock, sigma.appended(true), out);
}

BitWord random_word(std::mt19937_64& rng, std::size_t len) {
  BitWord w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(rng() & 1);
  return w;
}

// Up to `count` cells of depth R extending `root`, no two sharing a parent.
std::vector<BitWord> sparse_cells(std::mt19937_64& rng, const BitWord& root, unsigned R, unsigned count) {
  std::set<BitWord> parents;
  std::vector<BitWord> cells;
  for (unsigned tries = 0; cells.size() < count && tries < 64 * count; ++tries) {
    BitWord parent = root.concat(random_word(rng, R - 1 - root.size()));
    if (!parents.insert(parent).second) continue;
    cells.push_back(parent.appended(rng() & 1));
  }
  return cells;
}

std::vector<BitWord> distinct_cells(std::mt19937_64& rng, unsigned R, std::size_t count, std::set<BitWord> avoid = {}) {
  std::vector<BitWord> cells;
  count = std::min<std::size_t>(count, (std::size_t{1} << R) - avoid.size());
  while (cells.size() < count) {
    BitWord c = random_word(rng, R);
    if (avoid.insert(c).second) cells.push_back(c);
  }
  return cells;
}

void split_antichain(std::mt19937_64& rng, const BitWord& sigma, unsigned R, std::vector<BitWord>& out) {
  if (sigma.size() < R && (sigma.size() < 2 || rng() % 3 != 0)) {
    split_antichain(rng, sigma.appended(false), R, out);
    split_antichain(rng, sigma.appended(true), R, out);
  } else {
    out.push_back(sigma);
  }
}

}  // namespace

Presentation random_presentation(Ideal ideal, std::uint64_t seed, const PresentationParams& params) {
  const unsigned R = params.resolution;
  if (R < 2 || R > 16 || params.levels == 0)
    throw Error(ErrorKind::InfeasibleParams, "presentation resolution must be in [2,16] with at least one level");
  std::mt19937_64 rng(seed);
  Presentation p;
  p.ideal = ideal;
  p.resolution = R;
  const std::uint64_t cells = std::uint64_t{1} << R;
  switch (ideal) {
    case Ideal::M:
    case Ideal::MPlus: {
      if (ideal == Ideal::MPlus) p.root = random_word(rng, rng() % std::min<unsigned>(4, R - 1));
      for (unsigned n = 0; n < params.levels; ++n) {
        std::vector<BitWord> knock = sparse_cells(rng, p.root, R, 1 + rng() % 4);
        if (!p.root.empty() && rng() % 2) knock.push_back(p.root.flipped_from(p.root.size() - 1));
        std::vector<BitWord> gens;
        complement_cover(knock, BitWord(), gens);
        p.levels.push_back(std::move(gens));
      }
      break;
    }
    case Ideal::N:
      for (unsigned n = 0; n < params.levels; ++n) {
        std::uint64_t cap = (cells + std::max(n, 1u) - 1) / std::max(n, 1u) - 1;  // t·2^{-R} < 1/n
        std::size_t t = 1 + rng() % std::min<std::uint64_t>(cap, 24);
        std::vector<BitWord> level{BitWord::zeros(R)};
        auto rest = distinct_cells(rng, R, t - 1, {level[0]});
        level.insert(level.end(), rest.begin(), rest.end());
        p.levels.push_back(std::move(level));
      }
      break;
    case Ideal::E:
      for (unsigned n = 0; n < params.levels; ++n) {
        std::vector<BitWord> level;
        split_antichain(rng, BitWord(), R, level);
        std::vector<std::size_t> droppable;
        for (std::size_t i = 0; i < level.size(); ++i)
          if ((std::uint64_t{1} << level[i].size()) > R) droppable.push_back(i);
        if (!droppable.empty() && level.size() > 1)
          level.erase(level.begin() + static_cast<std::ptrdiff_t>(droppable[rng() % droppable.size()]));
        p.levels.push_back(std::move(level));
      }
      break;
    case Ideal::NPlus: {
      p.k = 2 + rng() % 4;
      std::uint64_t tmax = (cells * (p.k - 1) - 1) / p.k;  // t·k < 2^R (k-1)
      p.words = distinct_cells(rng, R, 1 + rng() % tmax);
      break;
    }
    case Ideal::EPlus: {
      // x_0 covers all but a small set C of cells; x_1 marks C plus a growing
      // set of extra cells at every level, kept below weight 1/(levels-1).
      unsigned top = std::max(1u, params.levels - 1);
      std::uint64_t room = (cells + top - 1) / top - 1;  // |W_n| < 2^R / top
      std::size_t c_size = 1 + rng() % std::max<std::uint64_t>(1, std::min<std::uint64_t>(room, 12));
      auto C = distinct_cells(rng, R, c_size);
      std::set<BitWord> cset(C.begin(), C.end());
      for (std::uint64_t i = 0; i < cells; ++i) {
        BitWord c = BitWord::from_index(i, R);
        if (!cset.count(c)) p.words.push_back(c);
      }
      p.k = static_cast<unsigned>(cells / C.size() + 1);
      auto extras = distinct_cells(rng, R, std::min<std::uint64_t>(room - C.size(), 6), cset);
      std::size_t used = 0;
      for (unsigned n = 0; n < params.levels; ++n) {
        if (used < extras.size() && rng() % 2) ++used;
        std::vector<BitWord> level = C;
        level.insert(level.end(), extras.begin(), extras.begin() + static_cast<std::ptrdiff_t>(used));
        p.levels.push_back(std::move(level));
      }
      break;
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Text formats.

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      tokens.clear();
      for (std::string t; ls >> t;) tokens.push_back(t);
      if (!tokens.empty()) return true;
    }
    return false;
  }
  [[noreturn]] void bad(const std::string& what) const {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + what);
  }
  BitWord word(const std::string& t) const {
    try {
      return BitWord(t);
    } catch (const Error&) {
      bad("bad word '" + t + "'");
    }
  }
  unsigned number(const std::string& t) const {
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(t, &used);
      if (used != t.size() || v > UINT_MAX) bad("bad number '" + t + "'");
      return static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
      bad("bad number '" + t + "'");
    }
  }
};

}  // namespace

Presentation read_presentation(std::istream& in) {
  LineReader r{in};
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 3 || t[0] != "pres") r.bad("expected header 'pres <ideal> <resolution>'");
  Presentation p;
  p.ideal = parse_ideal(t[1]);
  p.resolution = r.number(t[2]);
  enum { None, List, Level } block = None;
  while (r.next(t)) {
    if (t[0] == "root" && t.size() == 2 && p.ideal == Ideal::MPlus) {
      p.root = r.word(t[1]);
    } else if (t[0] == "k" && t.size() == 2 && (p.ideal == Ideal::NPlus || p.ideal == Ideal::EPlus)) {
      p.k = r.number(t[1]);
    } else if (t[0] == "X0" && t.size() == 1 && (p.ideal == Ideal::NPlus || p.ideal == Ideal::EPlus)) {
      block = List;
    } else if (t[0] == "L" && t.size() == 2 && p.ideal != Ideal::NPlus) {
      if (r.number(t[1]) != p.levels.size()) r.bad("levels must appear as L 0, L 1, ... in order");
      p.levels.emplace_back();
      block = Level;
    } else if (t[0] == "w" && t.size() == 2 && block != None) {
      (block == List ? p.words : p.levels.back()).push_back(r.word(t[1]));
    } else {
      r.bad("unexpected line for a " + ideal_name(p.ideal) + " presentation");
    }
  }
  return p;
}

void write_presentation(std::ostream& out, const Presentation& p) {
  out << "pres " << ideal_name(p.ideal) << ' ' << p.resolution << '\n';
  if (p.ideal == Ideal::MPlus) out << "root " << p.root.str() << '\n';
  if (p.ideal == Ideal::NPlus || p.ideal == Ideal::EPlus) {
    out << "k " << p.k << "\nX0\n";
    for (const auto& w : p.words) out << "w " << w.str() << '\n';
  }
  for (std::size_t n = 0; n < p.levels.size(); ++n) {
    out << "L " << n << '\n';
    for (const auto& w : p.levels[n]) out << "w " << w.str() << '\n';
  }
}

Code read_code(std::istream& in) {
  LineReader r{in};
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 3 || t[0] != "code") r.bad("expected header 'code <shape> <ideal>'");
  Code code;
  code.shape = parse_shape(t[1]);
  code.ideal = parse_ideal(t[2]);
  if (shape_for(code.ideal) != code.shape)
    r.bad("shape " + t[1] + " does not fit ideal " + t[2] + " (expected " + shape_name(shape_for(code.ideal)) + ")");
  const bool indexed_ok = code.shape != CodeShape::Flat;
  while (r.next(t)) {
    if (t.back() != "1") r.bad("only entries equal to 1 are listed");
    if (t[0] == "x" && t.size() == 4 && code.shape == CodeShape::Indexed) {
      code.indexed.insert({r.number(t[1]), r.word(t[2])});
    } else if (t[0] == "x1" && t.size() == 4 && indexed_ok && code.shape == CodeShape::Pair) {
      code.indexed.insert({r.number(t[1]), r.word(t[2])});
    } else if (t[0] == "xf" && t.size() == 3 && code.shape == CodeShape::Flat) {
      code.flat.insert(r.word(t[1]));
    } else if (t[0] == "x0" && t.size() == 3 && code.shape == CodeShape::Pair) {
      code.flat.insert(r.word(t[1]));
    } else {
      r.bad("entry does not fit shape " + shape_name(code.shape));
    }
  }
  return code;
}

void write_code(std::ostream& out, const Code& code) {
  out << "code " << shape_name(code.shape) << ' ' << ideal_name(code.ideal) << '\n';
  const char* flat_tag = code.shape == CodeShape::Pair ? "x0" : "xf";
  const char* idx_tag = code.shape == CodeShape::Pair ? "x1" : "x";
  for (const auto& w : code.flat) out << flat_tag << ' ' << w.str() << " 1\n";
  for (const auto& [n, w] : code.indexed) out << idx_tag << ' ' << n << ' ' << w.str() << " 1\n";
}

}  // namespace cantor
