#include "cantor/verify.hpp"

#include <algorithm>
#include <set>

#include "cantor/errors.hpp"
#include "cantor/trees.hpp"
#include "verify_internal.hpp"

namespace cantor {

using vdetail::fail;
using vdetail::VerifyFailure;

namespace {

std::string rect_str(const BitWord& a, const BitWord& b) { return "[" + a.str() + "]x[" + b.str() + "]"; }

std::string cmp_str(const Dyadic& lhs, const Rational& rhs) {
  return lhs.str() + " is not > " + rational_str(rhs);
}

/// Path of the first difference between two JSON values, or "" if equal.
std::string first_json_difference(const Json& a, const Json& b, const std::string& path) {
  if (a.type() != b.type()) return path;
  if (a.is_object()) {
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
      if (ia.key() != ib.key()) return path + "/" + ia.key();
      auto sub = first_json_difference(ia.value(), ib.value(), path + "/" + ia.key());
      if (!sub.empty()) return sub;
    }
    return ia == a.end() && ib == b.end() ? "" : path;
  }
  if (a.is_array()) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      auto sub = first_json_difference(a[i], b[i], path + "/" + std::to_string(i));
      if (!sub.empty()) return sub;
    }
    return a.size() == b.size() ? "" : path;
  }
  return a == b ? "" : path.empty() ? "/" : path;
}

void compare_canonical(const Certificate& claimed, const Certificate& rebuilt) {
  if (serialize(claimed) == serialize(rebuilt)) return;
  const std::string where = first_json_difference(to_json(claimed), to_json(rebuilt), "");
  fail("canonical", -1, "certificate differs from the replayed run at " + (where.empty() ? "/" : where));
}

TreePrefix top_closure(const TreeSkeleton& sk, std::size_t address_len) {
  std::vector<BitWord> words;
  for (const auto& [addr, stem] : sk.stems)
    if (addr.size() == address_len) words.push_back(stem);
  return downward_closure(words);
}

void expect_class(const TreePrefix& t, TreeKind kind, const TreeWitness& w, const std::string& what) {
  const TreeVerdict v = classify_prefix(t, kind, w);
  if (!v.consistent) fail("tree-class", -1, what + " is not " + tree_kind_name(kind) + " at node " + v.node.str() + ": " + v.reason);
}

// ---- category ----

void check_category_structure(const Certificate& c, const DenseOpenFamily& fam) {
  const unsigned K = c.stages;
  if (c.category.size() != K + 1) fail("structure", -1, "expected " + std::to_string(K + 1) + " stage records");
  if (fam.count() <= K) fail("structure", -1, "family has " + std::to_string(fam.count()) + " levels");
  if (c.skeleton.levels != K) fail("structure", -1, "skeleton level count differs from stages");
  if (c.tree_class != (c.variant == Variant::SilverCat ? "silver" : c.variant == Variant::SpinasCat ? "spinas" : "uniformly-perfect"))
    fail("structure", -1, "claimed tree class '" + c.tree_class + "' does not match the variant");
  for (unsigned n = 0; n <= K; ++n) {
    const auto& r = c.category[n];
    if (r.n != n) fail("structure", static_cast<int>(n), "stage index out of order");
    if (r.base != canonical_cylinder(n)) fail("structure", static_cast<int>(n), "base is not S_n");
    for (const auto& q : r.queries) {
      if (q.level != n) fail("query", static_cast<int>(n), "query at level " + std::to_string(q.level));
      const auto ans = vdetail::scan_generators(fam, q.level, q.sigma, q.rho);
      if (!ans || ans->first != q.sigma_out || ans->second != q.rho_out)
        fail("query", static_cast<int>(n), "recorded answer to " + rect_str(q.sigma, q.rho) + " differs from the family");
    }
  }
}

/// τ_0^{j_0} i_0 ... τ_{n-1}^{j_{n-1}} i_{n-1} from the recorded tails.
BitWord tail_prefix(const Certificate& c, const BitWord& i, const BitWord* j) {
  BitWord out;
  for (std::size_t k = 0; k < i.size(); ++k) {
    const BitWord& t = c.category[k].tau;
    out = out.concat(j != nullptr && (*j)[k] ? t.complemented() : t);
    out.push_back(i[k]);
  }
  return out;
}

void check_silver_category(const Certificate& c, const DenseOpenFamily& fam) {
  const unsigned K = c.stages;
  std::map<BitWord, BitWord> expect;
  for (unsigned n = 0; n <= K; ++n) {
    const auto& r = c.category[n];
    const int st = static_cast<int>(n);
    if (!r.base.is_prefix_of(r.v)) fail("silver-cat/1", st, "V_n = [" + r.v.str() + "] is not inside S_n = [" + r.base.str() + "]");
    for (const auto& i : all_words(n)) {
      const BitWord stem = tail_prefix(c, i, nullptr).concat(r.tau);
      if (!vdetail::rect_covered(fam.levels[n], stem, r.v))
        fail("silver-cat/2", st, rect_str(stem, r.v) + " is not inside U_" + std::to_string(n));
      expect[i] = stem;
    }
  }
  if (c.skeleton.stems != expect || c.skeleton.labels) fail("structure", -1, "skeleton stems do not follow the recorded tails");
  // t = τ_0 0 τ_1 0 ... τ_K and A = the K branching positions.
  SilverWitness w;
  for (unsigned n = 0; n <= K; ++n) {
    w.pattern = w.pattern.concat(c.category[n].tau);
    if (n < K) {
      w.free_positions.push_back(static_cast<unsigned>(w.pattern.size()));
      w.pattern.push_back(false);
    }
  }
  expect_class(top_closure(c.skeleton, K), TreeKind::Silver, w, "skeleton closure");
}

void check_spinas_category(const Certificate& c, const DenseOpenFamily& fam) {
  const unsigned K = c.stages;
  std::map<BitWord, BitWord> expect;
  std::map<BitWord, BranchLabel> labels;
  for (unsigned n = 0; n <= K; ++n) {
    const auto& r = c.category[n];
    const int st = static_cast<int>(n);
    if (!r.base.is_prefix_of(r.v)) fail("spinas-cat/1", st, "V_n = [" + r.v.str() + "] is not inside S_n = [" + r.base.str() + "]");
    for (const auto& i : all_words(n)) {
      for (const auto& j : all_words(n + 1)) {
        const BitWord stem = tail_prefix(c, i, &j).concat(j[n] ? r.tau.complemented() : r.tau);
        if (!vdetail::rect_covered(fam.levels[n], stem, r.v))
          fail("spinas-cat/2", st, "(i, j) = (" + i.str() + ", " + j.str() + "): " + rect_str(stem, r.v) + " is not inside U_" + std::to_string(n));
        BitWord addr;
        for (unsigned k = 0; k < n; ++k) {
          addr.push_back(j[k]);
          addr.push_back(i[k]);
        }
        addr.push_back(j[n]);
        expect[addr] = stem;
        labels[addr] = BranchLabel{i, j};
      }
    }
  }
  if (c.skeleton.stems != expect || !c.skeleton.labels || *c.skeleton.labels != labels)
    fail("structure", -1, "skeleton stems or labels do not follow the recorded tails");

  const TreePrefix whole = top_closure(c.skeleton, 2 * K + 1);
  expect_class(whole, TreeKind::Spinas, {}, "skeleton closure");
  const TreeSkeleton sub = extract_silver_subtree(c.skeleton);
  const TreePrefix silver = top_closure(sub, K);
  expect_class(silver, TreeKind::Silver, {}, "j = 0 subtree");
  for (const auto& leaf : silver.level(whole.depth))
    if (!whole.contains(leaf)) fail("tree-class", -1, "silver subtree leaf " + leaf.str() + " is not in the spinas body");
}

void check_uniform_category(const Certificate& c, const DenseOpenFamily& fam) {
  const unsigned K = c.stages;
  std::map<BitWord, BitWord> expect;
  for (unsigned n = 0; n <= K; ++n) {
    const auto& r = c.category[n];
    const int st = static_cast<int>(n);
    const auto words = all_words(n);
    if (r.sigma.size() != words.size()) fail("structure", st, "sigma must have 2^n entries");
    for (const auto& t : words)
      if (!r.sigma.count(t)) fail("structure", st, "sigma misses address " + t.str());
    const std::size_t len = r.sigma.begin()->second.size();
    for (const auto& [t, s] : r.sigma) {
      if (n > 0) {
        const BitWord need = c.category[n - 1].sigma.at(t.prefix(n - 1)).appended(t[n - 1]);
        if (!need.is_prefix_of(s)) fail("uniform-cat/i", st, "sigma_" + t.str() + " = " + s.str() + " does not extend " + need.str());
      }
      if (s.size() != len) fail("uniform-cat/ii", st, "sigma words at this level differ in length");
    }
    for (const auto& [t, s] : r.sigma)
      for (const auto& [u, su] : r.sigma)
        if (t != u && !vdetail::rect_covered(fam.levels[n], s, su))
          fail("uniform-cat/iii", st, rect_str(s, su) + " is not inside U_" + std::to_string(n));
    if (!r.base.is_prefix_of(r.v)) fail("uniform-cat/iv", st, "V_n = [" + r.v.str() + "] is not inside B_n = [" + r.base.str() + "]");
    for (const auto& [t, s] : r.sigma)
      if (!vdetail::rect_covered(fam.levels[n], s, r.v))
        fail("uniform-cat/v", st, rect_str(s, r.v) + " is not inside U_" + std::to_string(n));

    if (n == 0) {
      if (!r.chain.empty() || !r.sigma_pre.empty()) fail("structure", st, "stage 0 has no chain");
    } else {
      if (r.chain.size() != words.size()) fail("descending", st, "chain must have 2^n links");
      if (!r.base.is_prefix_of(r.chain.front())) fail("descending", st, "first link is not inside B_n");
      for (std::size_t m = 1; m < r.chain.size(); ++m)
        if (!r.chain[m - 1].is_prefix_of(r.chain[m])) fail("descending", st, "link " + std::to_string(m) + " is not inside its predecessor");
      if (r.chain.back() != r.v) fail("descending", st, "V_n is not the last link");
      if (r.sigma_pre.size() != r.sigma.size()) fail("structure", st, "sigma-pre must have 2^n entries");
      for (const auto& [t, s] : r.sigma_pre) {
        auto it = r.sigma.find(t);
        if (it == r.sigma.end() || !s.is_prefix_of(it->second)) fail("descending", st, "sigma_" + t.str() + " does not extend its pre-shrink word");
      }
    }
    for (const auto& [t, s] : r.sigma) expect[t] = s;
  }
  if (c.skeleton.stems != expect || c.skeleton.labels) fail("structure", -1, "skeleton stems do not match the recorded sigma");
  expect_class(top_closure(c.skeleton, K), TreeKind::UniformlyPerfect, {}, "skeleton closure");
}

// ---- measure ----

void check_measure_structure(const Certificate& c, const Filtration& filt) {
  const unsigned K = c.stages;
  if (c.measure.size() != K + 1) fail("structure", -1, "expected " + std::to_string(K + 1) + " stage records");
  if (c.filtration_depth != filt.depth()) fail("structure", -1, "filtration depth differs from the instance");
  if (c.skeleton.levels != K) fail("structure", -1, "skeleton level count differs from stages");
  const bool uniform = c.variant == Variant::UniformMeas;
  if (c.tree_class != (uniform ? "uniformly-perfect" : "silver")) fail("structure", -1, "claimed tree class does not match the variant");
  std::map<BitWord, BitWord> expect;
  for (unsigned k = 0; k <= K; ++k) {
    const auto& r = c.measure[k];
    const int st = static_cast<int>(k);
    if (r.k != k) fail("structure", st, "stage index out of order");
    if (r.eps != vdetail::eps_of(k)) fail("structure", st, "epsilon is " + rational_str(r.eps) + ", expected " + rational_str(vdetail::eps_of(k)));
    if (k == 0 && r.N != 0) fail("structure", st, "N_0 must be 0");
    if (k > 0 && r.N <= c.measure[k - 1].N) fail("structure", st, "N_k must increase");
    if (r.n_index >= filt.size()) fail("structure", st, "n_k beyond the filtration");
    if (r.sigma.size() != (std::size_t{1} << k)) fail("structure", st, "sigma must have 2^k entries");
    for (const auto& t : all_words(k)) {
      auto it = r.sigma.find(t);
      if (it == r.sigma.end()) fail("structure", st, "sigma misses address " + t.str());
      if (it->second.size() != r.N) fail("structure", st, "sigma_" + t.str() + " has length " + std::to_string(it->second.size()));
      expect[t] = it->second;
    }
    if (r.H.size() != k + 1) fail("structure", st, "H must have k + 1 entries");
    for (const auto& h : r.H)
      if (h.dim() != 1 || h.depth() != r.N) fail("structure", st, "H sets must be dim 1 at depth N_k");
    const std::size_t npicks = k == 0 ? 0 : uniform ? 2 : 1;
    if (r.picks.size() != npicks) fail("structure", st, "wrong number of picks");
    for (const auto& p : r.picks)
      if (p.size() != r.N) fail("structure", st, "pick " + p.str() + " has the wrong length");
  }
  if (c.skeleton.stems != expect || c.skeleton.labels) fail("structure", -1, "skeleton stems do not match the recorded sigma");
}

void check_h_conditions(const Certificate& c, const Filtration& filt, const std::string& prefix) {
  const unsigned K = c.stages;
  for (unsigned k = 0; k <= K; ++k) {
    const auto& r = c.measure[k];
    const int st = static_cast<int>(k);
    // 3): H_{k,k} is everything, and each H_{j,.} loses less than the allowed fraction.
    if (r.H[k].count() != r.H[k].cell_count()) fail(prefix + "/3", st, "H_{k,k} is not the full space");
    if (k > 0) {
      BigInt den = BigInt(1) << k;
      den *= k;
      const Rational keep = 1 - Rational(BigInt(1), den);
      for (unsigned j = 0; j < k; ++j) {
        const Rational bound = keep * c.measure[k - 1].H[j].measure().to_rational();
        if (!(r.H[j].measure() > bound))
          fail(prefix + "/3", st, "lambda(H_{" + std::to_string(j) + "," + std::to_string(k) + "}) = " + cmp_str(r.H[j].measure(), bound));
        if (!r.H[j].subset_of(c.measure[k - 1].H[j]))
          fail(prefix + "/3", st, "H_{" + std::to_string(j) + "," + std::to_string(k) + "} is not inside its predecessor");
      }
    }
    // 4): every H-column meets F_{n_j} densely in each [σ_τ]×[ρ].
    const Rational bound = (1 - r.eps * r.eps) * Dyadic::unit(2 * r.N).to_rational();
    for (unsigned j = 0; j <= k; ++j) {
      const ClopenSet& f = filt[c.measure[j].n_index];
      for (const auto& rho : r.H[j].cells1()) {
        for (const auto& [t, s] : r.sigma) {
          const Dyadic m = vdetail::rect_measure(f, s, rho);
          if (!(m > bound))
            fail(prefix + "/4", st, "j = " + std::to_string(j) + ", tau = " + t.str() + ", rho = " + rho.str() + ": lambda(F cap " + rect_str(s, rho) + ") = " + cmp_str(m, bound));
        }
      }
    }
  }
}

void check_silver_measure(const Certificate& c) {
  for (unsigned k = 1; k <= c.stages; ++k) {
    const auto& prev = c.measure[k - 1];
    const auto& r = c.measure[k];
    const int st = static_cast<int>(k);
    std::optional<BitWord> common;
    for (const auto& [t, s] : r.sigma) {
      const BitWord need = prev.sigma.at(t.prefix(k - 1)).appended(t[k - 1]);
      if (!need.is_prefix_of(s)) fail("silver-meas/1", st, "sigma_" + t.str() + " = " + s.str() + " does not extend " + need.str());
      const BitWord tail = s.suffix_from(prev.N + 1);
      if (common && *common != tail) fail("silver-meas/2", st, "sigma_" + t.str() + " differs from its siblings off the split position");
      common = tail;
    }
  }
}

void check_uniform_measure(const Certificate& c, const Filtration& filt) {
  for (unsigned k = 0; k <= c.stages; ++k) {
    const auto& r = c.measure[k];
    const int st = static_cast<int>(k);
    if (k > 0) {
      const auto& prev = c.measure[k - 1];
      std::optional<std::size_t> split;
      for (const auto& [t, s] : prev.sigma) {
        const BitWord& a = r.sigma.at(t.appended(false));
        const BitWord& b = r.sigma.at(t.appended(true));
        if (!s.is_prefix_of(a) || !s.is_prefix_of(b) || a == b)
          fail("uniform-meas/1", st, "children of " + t.str() + " do not extend sigma_" + t.str() + " or coincide");
        const std::size_t p = first_difference(a, b);
        if (split && *split != p) fail("uniform-meas/2", st, "children of " + t.str() + " split at " + std::to_string(p) + ", not " + std::to_string(*split));
        split = p;
      }
    }
    // 5): every pair of stems (including τ = τ′, split level k) carries enough of F_{n_{d(τ,τ′)}}.
    const Rational bound = (1 - r.eps) * Dyadic::unit(2 * r.N).to_rational();
    for (const auto& [t, s] : r.sigma) {
      for (const auto& [u, su] : r.sigma) {
        const std::size_t d = t == u ? k : first_difference(t, u);
        const Dyadic m = vdetail::rect_measure(filt[c.measure[d].n_index], s, su);
        if (!(m > bound))
          fail("uniform-meas/5", st, "tau = " + t.str() + ", tau' = " + u.str() + ": lambda(F cap " + rect_str(s, su) + ") = " + cmp_str(m, bound));
      }
    }
  }
}

void check_measure_extras(const Certificate& c, const Filtration& filt) {
  const unsigned K = c.stages;
  const bool uniform = c.variant == Variant::UniformMeas;
  if (K >= 1) {
    const auto& r = c.measure[1];
    for (const auto& s : r.slices) {
      if (s.j == 0 && s.tau.empty() && !(s.measure > Rational(3, 4))) fail("step-1", 1, "lambda(X_{0,empty}) = " + cmp_str(s.measure, Rational(3, 4)));
    }
    if (!(r.H[0].measure() > Rational(1, 2))) fail("step-1", 1, "lambda(H_{0,1}) = " + cmp_str(r.H[0].measure(), Rational(1, 2)));
    if (uniform && (!r.pair_set_measure || !(*r.pair_set_measure > Rational(14, 16))))
      fail("step-1", 1, "symmetrized first set has measure " + (r.pair_set_measure ? cmp_str(*r.pair_set_measure, Rational(14, 16)) : std::string("missing")));
  }
  for (unsigned j = 0; j <= K; ++j) {
    Rational prod = 1;
    for (unsigned k = j; k < K; ++k) {
      BigInt den = BigInt(1) << (k + 1);
      den *= (k + 1);
      prod *= 1 - Rational(BigInt(1), den);
    }
    const Dyadic m = c.measure[K].H[j].measure();
    if (m.to_rational() < prod) fail("product-bound", static_cast<int>(K), "lambda(H_{" + std::to_string(j) + ",K}) = " + m.str() + " is below " + rational_str(prod));
  }
  const auto& last = c.measure[K];
  if (last.N >= filt.depth()) {
    const unsigned d = filt.depth();
    for (unsigned j = 0; j <= K; ++j) {
      const ClopenSet& f = filt[c.measure[j].n_index];
      for (const auto& rho : last.H[j].cells1())
        for (const auto& [t, s] : last.sigma)
          if (!f.contains(s.prefix(d), rho.prefix(d)))
            fail("final-inclusion", static_cast<int>(K), "cell " + rect_str(s, rho) + " of body x H_" + std::to_string(j) + " is not in F_n_" + std::to_string(j));
    }
  }
  expect_class(top_closure(c.skeleton, K), uniform ? TreeKind::UniformlyPerfect : TreeKind::Silver, {}, "skeleton closure");
}

template <class Body>
VerifyReport guarded(Body&& body) {
  try {
    body();
  } catch (const VerifyFailure& f) {
    return f.report;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DigestMismatch || e.kind() == ErrorKind::MalformedCertificate) throw;
    return VerifyReport{false, "structure", -1, e.what()};
  }
  return {};
}

}  // namespace

std::string format_report(const VerifyReport& report) {
  if (report.pass) return "PASS";
  std::string out = "FAIL " + report.condition;
  if (report.stage >= 0) out += " stage " + std::to_string(report.stage);
  return out + ": " + report.detail;
}

VerifyReport verify_certificate(const Certificate& cert, const DenseOpenFamily& family) {
  if (!is_category(cert.variant)) throw Error(ErrorKind::MalformedCertificate, "measure certificate checked against a dense-open family");
  const std::string digest = instance_digest(family);
  if (cert.input_digest != digest) throw Error(ErrorKind::DigestMismatch, "certificate names " + cert.input_digest + ", instance is " + digest);
  return guarded([&] {
    check_category_structure(cert, family);
    switch (cert.variant) {
      case Variant::SilverCat: check_silver_category(cert, family); break;
      case Variant::SpinasCat: check_spinas_category(cert, family); break;
      default: check_uniform_category(cert, family); break;
    }
    compare_canonical(cert, vdetail::replay_category(cert, family));
  });
}

VerifyReport verify_certificate(const Certificate& cert, const Filtration& filt) {
  if (is_category(cert.variant)) throw Error(ErrorKind::MalformedCertificate, "category certificate checked against a filtration");
  const std::string digest = instance_digest(filt);
  if (cert.input_digest != digest) throw Error(ErrorKind::DigestMismatch, "certificate names " + cert.input_digest + ", instance is " + digest);
  return guarded([&] {
    check_measure_structure(cert, filt);
    if (cert.variant == Variant::SilverMeas) {
      check_silver_measure(cert);
      check_h_conditions(cert, filt, "silver-meas");
    } else {
      check_uniform_measure(cert, filt);
      check_h_conditions(cert, filt, "uniform-meas");
    }
    check_measure_extras(cert, filt);
    compare_canonical(cert, vdetail::replay_measure(cert, filt));
  });
}

}  // namespace cantor
