#include <algorithm>
#include <climits>
#include <variant>

#include "cantor/codings.hpp"
#include "cantor/errors.hpp"

namespace cantor {

namespace {

// Null-type tables (N, and x_1 of E+) carry the 1/n bound, which is vacuous at
// n = 0, so their levels start at 1.
unsigned first_level(const Code& code) {
  return code.ideal == Ideal::N || code.ideal == Ideal::EPlus ? 1 : 0;
}

// Finite table lookups shared by every clause.
struct Table {
  const Code& code;
  std::size_t longest;

  explicit Table(const Code& c) : code(c), longest(c.max_length()) {}

  /// ∃τ ⊇ σ with |τ| <= s and x(n, τ) = 1. Extensions of σ are contiguous in
  /// lexicographic order, starting at σ itself.
  bool has_ext(unsigned n, const BitWord& sigma, std::size_t s) const {
    for (auto it = code.indexed.lower_bound({n, sigma});
         it != code.indexed.end() && it->first == n && sigma.is_prefix_of(it->second); ++it)
      if (it->second.size() <= s) return true;
    return false;
  }

  Rational level_sum(unsigned n, std::size_t m) const {
    Rational s = 0;
    for (auto it = code.indexed.lower_bound({n, BitWord()}); it != code.indexed.end() && it->first == n; ++it)
      if (it->second.size() <= m) s += Rational(BigInt(1), BigInt(1) << it->second.size());
    return s;
  }

  Rational flat_sum() const {
    Rational s = 0;
    for (const auto& w : code.flat) s += Rational(BigInt(1), BigInt(1) << w.size());
    return s;
  }

  /// [ρ] is a finite union of cylinders [σ] with ρ ⊆ σ and x_0(σ) = 1.
  bool covered(const BitWord& rho) const {
    if (code.flat.count(rho)) return true;
    if (rho.size() >= longest) return false;
    return covered(rho.appended(false)) && covered(rho.appended(true));
  }

  /// Least m <= limit with x(n, y↾m) = 1.
  std::optional<unsigned> hit(unsigned n, const Point& y, std::size_t limit) const {
    for (std::size_t m = 0; m <= limit; ++m)
      if (code.at(n, y.restrict(m))) return static_cast<unsigned>(m);
    return std::nullopt;
  }
};

Verdict make(VerdictStatus status, bool conclusive, Witness w, unsigned b, unsigned s) {
  Verdict v;
  v.status = status;
  v.conclusive = conclusive;
  v.witness = std::move(w);
  v.bound = b;
  v.search = s;
  return v;
}

// Words σ with root ⊆ σ and |σ| < b, length-lexicographic.
template <class F>
bool for_words_below(const BitWord& root, unsigned b, F&& f) {
  for (std::size_t len = root.size(); len < b; ++len)
    for (const auto& tail : all_words(static_cast<unsigned>(len - root.size())))
      if (!f(root.concat(tail))) return false;
  return true;
}

// First (n, σ) breaking density below root.
std::optional<Witness> dense_failure(const Table& t, const BitWord& root, unsigned b, unsigned s) {
  std::optional<Witness> bad;
  for (unsigned n = 0; n <= b && !bad; ++n)
    for_words_below(root, b, [&](const BitWord& sigma) {
      if (t.has_ext(n, sigma, s)) return true;
      bad = Witness{.clause = "dense", .n = n, .sigma = sigma};
      return false;
    });
  return bad;
}

std::optional<Witness> null_failure(const Table& t, unsigned b, const std::string& clause) {
  for (unsigned n = 1; n <= b; ++n)
    for (unsigned m = 0; m <= b; ++m) {
      Rational s = t.level_sum(n, m);
      if (s >= Rational(1, n)) return Witness{.clause = clause, .n = n, .m = m, .value = s};
    }
  return std::nullopt;
}

// x_0 weight; returns the least k with Σ < 1 - 1/k, or a witness that none exists.
std::variant<unsigned, Witness> positive_k(const Table& t, const std::string& clause) {
  Rational s = t.flat_sum();
  if (s >= 1) return Witness{.clause = clause, .m = static_cast<unsigned>(t.longest), .value = s};
  // 1 - 1/k > s  <=>  k > 1/(1-s)
  Rational inv = 1 / (1 - s);
  BigInt k = numerator(inv) / denominator(inv) + 1;
  return static_cast<unsigned>(k);
}

std::optional<Witness> cover_failure(const Table& t, unsigned b, unsigned s) {
  std::optional<Witness> bad;
  for_words_below(BitWord(), b, [&](const BitWord& rho) {
    if (t.covered(rho)) return true;
    for (unsigned n = 1; n <= b; ++n)
      if (!t.has_ext(n, rho, s)) {
        bad = Witness{.clause = "cover-hit", .n = n, .rho = rho};
        return false;
      }
    for (unsigned n = 1; n < b; ++n)
      for (auto it = t.code.indexed.lower_bound({n, rho});
           it != t.code.indexed.end() && it->first == n && rho.is_prefix_of(it->second); ++it)
        if (!t.has_ext(n + 1, it->second, s)) {
          bad = Witness{.clause = "cover-continue", .n = n, .tau = it->second, .rho = rho};
          return false;
        }
    return true;
  });
  return bad;
}

Verdict phi_m_plus(const Table& t, unsigned b, unsigned s, bool exhaustive) {
  const std::size_t max_root = b == 0 ? 0 : std::min<std::size_t>(s, b - 1);
  for (std::size_t len = 0; len <= max_root; ++len)
    for (const auto& rho : all_words(static_cast<unsigned>(len)))
      if (!dense_failure(t, rho, b, s))
        return make(VerdictStatus::UnrefutedAtBound, false, Witness{.clause = "rho", .rho = rho}, b, s);
  Witness w = *dense_failure(t, BitWord(), b, s);
  w.clause = "root";
  return make(VerdictStatus::Refuted, exhaustive, w, b, s);
}

}  // namespace

Verdict phi_check(const Code& code, unsigned b, std::optional<unsigned> search) {
  const Table t(code);
  const unsigned s = search.value_or(static_cast<unsigned>(std::max<std::size_t>(b, t.longest)));
  const bool exhaustive = s >= t.longest;
  auto refuted = [&](Witness w, bool conclusive) { return make(VerdictStatus::Refuted, conclusive, std::move(w), b, s); };
  auto unrefuted = [&](Witness w = {}) { return make(VerdictStatus::UnrefutedAtBound, false, std::move(w), b, s); };

  switch (code.ideal) {
    case Ideal::M:
      if (auto w = dense_failure(t, BitWord(), b, s)) return refuted(*w, exhaustive);
      return unrefuted();
    case Ideal::MPlus:
      return phi_m_plus(t, b, s, exhaustive);
    case Ideal::N:
      if (auto w = null_failure(t, b, "sum")) return refuted(*w, true);
      return unrefuted();
    case Ideal::E:
      for (unsigned n = 0; n <= b; ++n) {
        for (auto it = code.indexed.lower_bound({n, BitWord()}); it != code.indexed.end() && it->first == n; ++it)
          for (std::size_t i = 0; i < it->second.size(); ++i)
            if (code.at(n, it->second.prefix(i)))
              return refuted(Witness{.clause = "antichain", .n = n, .sigma = it->second.prefix(i), .tau = it->second},
                             true);
        Rational total = t.level_sum(n, s);
        for (unsigned k = 1; k <= b; ++k)
          if (total <= 1 - Rational(1, k))
            return refuted(Witness{.clause = "measure", .n = n, .k = k, .value = total}, exhaustive);
      }
      return unrefuted();
    case Ideal::NPlus: {
      auto k = positive_k(t, "sum");
      if (auto* w = std::get_if<Witness>(&k)) return refuted(*w, true);
      Verdict v = unrefuted(Witness{.clause = "k", .k = std::get<unsigned>(k)});
      v.conclusive = true;
      return v;
    }
    case Ideal::EPlus: {
      auto k = positive_k(t, "x0-sum");
      if (auto* w = std::get_if<Witness>(&k)) return refuted(*w, true);
      if (auto w = null_failure(t, b, "x1-sum")) return refuted(*w, true);
      if (auto w = cover_failure(t, b, s)) return refuted(*w, exhaustive);
      return unrefuted(Witness{.clause = "k", .k = std::get<unsigned>(k)});
    }
  }
  return unrefuted();
}

Verdict psi_member(const Code& code, const Point& y, unsigned b) {
  if (!y.infinite() && y.prefix.size() < b)
    throw Error(ErrorKind::InsufficientResolution,
                "point prefix has " + std::to_string(y.prefix.size()) + " bits, bound " + std::to_string(b) + " needs " +
                    std::to_string(b));
  const Table t(code);
  const std::size_t limit = std::min(y.available(), t.longest);
  const bool exhaustive = y.available() >= t.longest;
  const unsigned s = static_cast<unsigned>(limit);

  if (code.ideal == Ideal::NPlus) {
    for (std::size_t m = 0; m <= limit; ++m)
      if (code.at(y.restrict(m)))
        return make(VerdictStatus::NonmemberWitness, true,
                    Witness{.clause = "hit", .m = static_cast<unsigned>(m), .sigma = y.restrict(m)}, b, s);
    return make(VerdictStatus::MemberVerifiedAtBound, exhaustive, {}, b, s);
  }

  const bool negated = code.ideal == Ideal::M || code.ideal == Ideal::E;
  for (unsigned n = first_level(code); n <= b; ++n)
    if (!t.hit(n, y, limit)) {
      Witness w{.clause = "miss", .n = n};
      return make(negated ? VerdictStatus::MemberVerifiedAtBound : VerdictStatus::NonmemberWitness, exhaustive, w, b,
                  s);
    }
  if (negated) return make(VerdictStatus::NonmemberWitness, false, Witness{.clause = "all-hit", .n = b}, b, s);
  return make(VerdictStatus::MemberVerifiedAtBound, false, {}, b, s);
}

bool witness_revalidates(const Code& code, const Verdict& v, const Point* y) {
  const Table t(code);
  const Witness& w = v.witness;
  const unsigned b = v.bound;
  const unsigned s = v.search;
  if (w.clause.empty()) return v.status == VerdictStatus::UnrefutedAtBound || v.status == VerdictStatus::MemberVerifiedAtBound;
  if (w.clause == "dense")
    return w.n && w.sigma && *w.n <= b && w.sigma->size() < b && !t.has_ext(*w.n, *w.sigma, s);
  if (w.clause == "root" || w.clause == "rho") {
    Verdict again = phi_check(code, b, s);
    return again.status == v.status && (w.clause == "root" || again.witness.rho == w.rho);
  }
  if (w.clause == "sum" && code.ideal == Ideal::NPlus) return w.value && *w.value == t.flat_sum() && *w.value >= 1;
  if (w.clause == "x0-sum") return w.value && *w.value == t.flat_sum() && *w.value >= 1;
  if (w.clause == "sum" || w.clause == "x1-sum")
    return w.n && w.m && w.value && *w.n >= 1 && *w.n <= b && *w.m <= b && t.level_sum(*w.n, *w.m) == *w.value &&
           *w.value >= Rational(1, *w.n);
  if (w.clause == "antichain")
    return w.n && w.sigma && w.tau && *w.sigma != *w.tau && w.sigma->comparable(*w.tau) && code.at(*w.n, *w.sigma) &&
           code.at(*w.n, *w.tau);
  if (w.clause == "measure")
    return w.n && w.k && w.value && *w.k >= 1 && t.level_sum(*w.n, s) == *w.value &&
           *w.value <= 1 - Rational(1, *w.k);
  if (w.clause == "k") return w.k && *w.k >= 1 && t.flat_sum() < 1 - Rational(1, *w.k);
  if (w.clause == "cover-hit")
    return w.rho && w.n && w.rho->size() < b && !t.covered(*w.rho) && !t.has_ext(*w.n, *w.rho, s);
  if (w.clause == "cover-continue")
    return w.rho && w.n && w.tau && w.rho->size() < b && !t.covered(*w.rho) && code.at(*w.n, *w.tau) &&
           w.rho->is_prefix_of(*w.tau) && !t.has_ext(*w.n + 1, *w.tau, s);
  if (!y) return false;
  const std::size_t limit = std::min<std::size_t>(y->available(), t.longest);
  if (w.clause == "miss") return w.n && !t.hit(*w.n, *y, limit);
  if (w.clause == "hit") return w.sigma && code.at(*w.sigma) && y->restrict(w.sigma->size()) == *w.sigma;
  if (w.clause == "all-hit") {
    for (unsigned n = first_level(code); n <= b; ++n)
      if (!t.hit(n, *y, limit)) return false;
    return true;
  }
  return false;
}

}  // namespace cantor
