// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every comparison is exact (dyadic or rational); wall-clock limits are part of
// the criteria that state them.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cantor/catengine.hpp"
#include "cantor/codings.hpp"
#include "cantor/errors.hpp"
#include "cantor/measengine.hpp"
#include "cantor/trees.hpp"
#include "cantor/verify.hpp"
#include "mutations.hpp"
#include "oracles.hpp"

using namespace cantor;

namespace {

// Collects the first few problems of a criterion; any problem makes it FAIL.
struct Tally {
  std::size_t checks = 0;
  std::vector<std::string> problems;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && problems.size() < 5) problems.push_back(what);
    if (!ok && problems.size() == 5) problems.push_back("...");
  }
  bool ok() const { return problems.empty(); }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& name, const std::function<std::string(Tally&)>& body, double limit_s = 0) {
  Tally t;
  const auto start = Clock::now();
  std::string summary;
  try {
    summary = body(t);
  } catch (const std::exception& e) {
    t.expect(false, std::string("uncaught: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0) t.expect(secs < limit_s, "runtime " + std::to_string(secs) + " s over " + std::to_string(limit_s) + " s");
  std::ostringstream line;
  line << (t.ok() ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << summary << " (" << t.checks << " checks, ";
  line.precision(2);
  line << std::fixed << secs << " s)";
  std::cout << line.str() << '\n';
  for (const auto& p : t.problems) std::cout << "    " << p << '\n';
  if (!t.ok()) ++failures;
}

TreePrefix closure_at_leaves(const TreeSkeleton& sk) {
  TreePrefix t = downward_closure(sk);
  for (const auto& w : t.nodes) t.depth = std::max<unsigned>(t.depth, static_cast<unsigned>(w.size()));
  return t;
}

bool classifies(const TreeSkeleton& sk, TreeKind kind) { return classify_prefix(closure_at_leaves(sk), kind).consistent; }

std::vector<BitWord> stems_at(const TreeSkeleton& sk, unsigned level) {
  std::vector<BitWord> out;
  for (const auto& [addr, stem] : sk.stems)
    if (addr.size() == level) out.push_back(stem);
  return out;
}

// ---------------------------------------------------------------- criterion 1
std::string density_filter_oracle(Tally& t) {
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 200; ++i) {
    auto in = oracle::random_density_instance(rng, 6);
    const ClopenSet x = density_filter(in.f, in.sigma, in.h, in.eps);
    t.expect(x == oracle::density_filter(in.f, in.sigma, in.h, in.eps), "instance " + std::to_string(i) + " differs from row enumeration");
    t.expect(x.measure() > (1 - in.eps) * ClopenSet::cylinder(in.sigma).measure().to_rational(),
             "instance " + std::to_string(i) + " misses the (1-eps) bound");
  }
  return "200 instances at depth <= 6 match brute force";
}

// ---------------------------------------------------------------- criterion 2
std::string silver_category(Tally& t) {
  const unsigned K = 5;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto fam = random_dense_open(seed, DenseOpenParams{10, K + 1, 4});
    auto oracle = oracle_from_family(fam);
    CategoryRun run = silver_category_inscribe(*oracle, K);
    const std::string tag = "seed " + std::to_string(seed);
    t.expect(verify_certificate(run.certificate, fam).pass, tag + " fails verify");
    t.expect(classifies(run.skeleton, TreeKind::Silver), tag + " skeleton is not Silver");
    for (const auto& rec : run.stages) {
      const ClopenSet u = fam.level_set(rec.n);
      for (const auto& stem : stems_at(run.skeleton, rec.n))
        t.expect(u.contains_rectangle(stem, rec.v), tag + " stage " + std::to_string(rec.n) + " rectangle leaves U_n");
    }
  }
  auto codiag = codiagonal_family(12, K + 1);
  auto oracle = oracle_from_family(codiag);
  CategoryRun run = silver_category_inscribe(*oracle, K);
  t.expect(verify_certificate(run.certificate, codiag).pass, "codiagonal fails verify");
  for (const auto& rec : run.stages)
    for (const auto& stem : stems_at(run.skeleton, rec.n))
      t.expect(stem.incomparable(rec.v), "codiagonal stage " + std::to_string(rec.n) + " rectangle meets a diagonal cell");
  return "50 families + codiagonal, K = 5, verified and Silver";
}

// ---------------------------------------------------------------- criterion 3
std::string spinas_category(Tally& t) {
  const unsigned K = 5;
  std::size_t pairs = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto fam = random_dense_open(seed, DenseOpenParams{10, K + 1, 4});
    auto oracle = oracle_from_family(fam);
    CategoryRun run = spinas_category_inscribe(*oracle, K);
    const std::string tag = "seed " + std::to_string(seed);
    t.expect(verify_certificate(run.certificate, fam).pass, tag + " fails verify");
    t.expect(classifies(run.skeleton, TreeKind::Perfect), tag + " skeleton is not perfect");
    for (const auto& rec : run.stages) {
      const ClopenSet u = fam.level_set(rec.n);
      std::set<std::pair<BitWord, BitWord>> seen;
      for (const auto& [addr, label] : *run.skeleton.labels) {
        if (label.i.size() != rec.n) continue;
        seen.insert({label.i, label.j.prefix(rec.n)});
        t.expect(u.contains_rectangle(run.skeleton.stems.at(addr), rec.v),
                 tag + " stage " + std::to_string(rec.n) + " (i, j) = (" + label.i.str() + ", " + label.j.str() + ") leaves U_n");
      }
      t.expect(seen.size() == (std::size_t{1} << (2 * rec.n)), tag + " stage " + std::to_string(rec.n) + " lacks 4^n choices");
      pairs += seen.size();
    }
    TreeSkeleton sub = extract_silver_subtree(run.skeleton);
    TreePrefix st = closure_at_leaves(sub);
    TreePrefix full = closure_at_leaves(run.skeleton);
    t.expect(classify_prefix(st, TreeKind::Silver).consistent, tag + " extracted subtree is not Silver");
    const unsigned d = st.depth;
    t.expect(full.depth == d && body_at_depth(st, d).subset_of(body_at_depth(full, d)), tag + " Silver body leaves the Spinas body");
  }
  return "50 families, K = " + std::to_string(K) + ", " + std::to_string(pairs) + " (i, j) choices, Silver subtrees inside";
}

// ---------------------------------------------------------------- criterion 4
void check_uniform_category(Tally& t, const DenseOpenFamily& fam, const CategoryRun& run, const std::string& tag) {
  t.expect(verify_certificate(run.certificate, fam).pass, tag + " fails verify");
  t.expect(classifies(run.skeleton, TreeKind::UniformlyPerfect), tag + " skeleton is not uniformly perfect");
  const unsigned K = static_cast<unsigned>(run.stages.size() - 1);
  const auto& last = run.stages.back();
  // Body cells lie under the stage-n stems of their ancestors.
  for (const auto& [tau, s] : last.sigma)
    for (const auto& rec : run.stages) t.expect(rec.sigma.at(tau.prefix(rec.n)).is_prefix_of(s), tag + " body escapes stage " + std::to_string(rec.n));
  for (const auto& rec : run.stages) {
    const ClopenSet u = fam.level_set(rec.n);
    for (const auto& [tau, s] : rec.sigma) t.expect(u.contains_rectangle(s, rec.v), tag + " sigma x V leaves U_n");
  }
  // Off-diagonal body x body pairs: from the stage separating them on, their
  // ancestors' rectangles sit inside U_n.
  for (const auto& [a, sa] : last.sigma)
    for (const auto& [b, sb] : last.sigma) {
      if (a == b) continue;
      for (unsigned n = static_cast<unsigned>(first_difference(a, b)) + 1; n <= K; ++n) {
        const auto& rec = run.stages[n];
        t.expect(fam.level_set(n).contains_rectangle(rec.sigma.at(a.prefix(n)), rec.sigma.at(b.prefix(n))),
                 tag + " pair " + a.str() + ", " + b.str() + " uncovered at stage " + std::to_string(n));
      }
    }
  // Body x V_K.
  for (const auto& [a, sa] : last.sigma) t.expect(fam.level_set(K).contains_rectangle(sa, last.v), tag + " body x V_K uncovered");
}

std::string uniform_category(Tally& t) {
  const unsigned K = 5;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto fam = random_dense_open(seed, DenseOpenParams{10, K + 1, 4});
    auto oracle = oracle_from_family(fam);
    check_uniform_category(t, fam, uniform_mycielski_category_inscribe(*oracle, K), "seed " + std::to_string(seed));
  }
  auto codiag = codiagonal_family(12, K + 1);
  auto oracle = oracle_from_family(codiag);
  check_uniform_category(t, codiag, uniform_mycielski_category_inscribe(*oracle, K), "codiagonal");
  return "30 families + codiagonal, K = 5, off-diagonal pairs covered cellwise";
}

// ---------------------------------------------------------------- criteria 5, 6
Rational loss(unsigned k) {
  BigInt den = BigInt(1) << k;
  den *= k;
  return 1 - Rational(BigInt(1), den);
}

void check_measure_common(Tally& t, const Filtration& filt, const MeasureRun& run, const std::string& tag) {
  const VerifyReport r = verify_certificate(run.certificate, filt);
  t.expect(r.pass, tag + " " + format_report(r));
  const unsigned K = static_cast<unsigned>(run.stages.size() - 1);
  for (unsigned k = 0; k + 1 <= K; ++k)
    t.expect(run.stages[k + 1].H[0].measure() > loss(k + 1) * run.stages[k].H[0].measure().to_rational(),
             tag + " H_0 shrinks too fast at stage " + std::to_string(k + 1));
  for (unsigned j = 0; j <= K; ++j) {
    Rational prod = 1;
    for (unsigned k = j; k < K; ++k) prod *= loss(k + 1);
    t.expect(run.stages[K].H[j].measure().to_rational() >= prod, tag + " product bound fails for j = " + std::to_string(j));
  }
  const auto& last = run.stages[K];
  t.expect(last.N >= filt.depth(), tag + " final depth below the filtration depth");
  for (unsigned j = 0; j <= K; ++j) {
    const ClopenSet& f = filt[run.stages[j].n_index];
    for (const auto& rho : last.H[j].cells1())
      for (const auto& [tau, s] : last.sigma)
        t.expect(f.contains_rectangle(s, rho), tag + " body x H_" + std::to_string(j) + " leaves F_n_j");
  }
  t.expect(run.stages[0].eps == Rational(1, 4) && run.stages[1].eps == Rational(1, 32), tag + " epsilon schedule");
  bool slice = false;
  for (const auto& s : run.stages[1].slices)
    if (s.j == 0 && s.tau.empty()) {
      slice = true;
      t.expect(s.measure > Rational(3, 4), tag + " lambda(X_{0,empty}) <= 3/4");
    }
  t.expect(slice, tag + " no X_{0,empty} slice recorded");
  t.expect(run.stages[1].H[0].measure() > Rational(1, 2), tag + " lambda(H_{0,1}) <= 1/2");
}

std::string silver_measure(Tally& t) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Filtration filt = random_filtration(seed, FiltrationParams{6, 6});
    for (std::size_t n = 0; n < filt.size(); ++n)
      t.expect(filt.measure(n).to_rational() >= 1 - Dyadic::unit(2 * static_cast<unsigned>(n) + 6).to_rational(), "schedule");
    MeasureRun run = silver_measure_inscribe(filt, 3);
    check_measure_common(t, filt, run, "seed " + std::to_string(seed));
    t.expect(classifies(run.skeleton, TreeKind::Silver), "seed " + std::to_string(seed) + " skeleton is not Silver");
  }
  return "20 filtrations at depth 6, K = 3; eps_0 = 1/4, eps_1 = 1/32, step-1 bounds hold";
}

std::string uniform_measure(Tally& t) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Filtration filt = random_filtration(seed, FiltrationParams{6, 6});
    MeasureRun run = uniform_mycielski_measure_inscribe(filt, 3);
    const std::string tag = "seed " + std::to_string(seed);
    check_measure_common(t, filt, run, tag);
    t.expect(classifies(run.skeleton, TreeKind::UniformlyPerfect), tag + " skeleton is not uniformly perfect");
    for (const auto& rec : run.stages) {
      const Rational bound = (1 - rec.eps) * Dyadic::unit(2 * rec.N).to_rational();
      for (const auto& [a, sa] : rec.sigma)
        for (const auto& [b, sb] : rec.sigma) {
          if (a == b) continue;
          const ClopenSet& f = filt[run.stages[first_difference(a, b)].n_index];
          t.expect(f.measure_in_rectangle(sa, sb) > bound, tag + " condition 5 at stage " + std::to_string(rec.k));
        }
    }
    const auto& pair = run.stages[1].pair_set_measure;
    t.expect(pair && *pair > Rational(14, 16), tag + " symmetrized first set not above 14/16");
  }
  return "20 filtrations at depth 6, K = 3; condition 5 and the 14/16 bound hold";
}

// ---------------------------------------------------------------- criterion 7
std::string codings_round_trip(Tally& t) {
  std::mt19937_64 rng(7007);
  std::size_t points = 0, members = 0, refutations = 0;
  for (Ideal ideal : {Ideal::M, Ideal::N, Ideal::E, Ideal::MPlus, Ideal::NPlus, Ideal::EPlus}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Presentation p = random_presentation(ideal, seed);
      const std::string tag = ideal_name(ideal) + " seed " + std::to_string(seed);
      const Code code = encode(p);
      const Verdict phi = phi_check(code, 8);
      t.expect(phi.status == VerdictStatus::UnrefutedAtBound, tag + " phi: " + describe(phi));
      t.expect(witness_revalidates(code, phi), tag + " phi witness");
      const unsigned b = static_cast<unsigned>(p.levels.empty() ? p.resolution : p.levels.size() - 1);
      for (int i = 0; i < 100; ++i) {
        Point y;
        for (unsigned k = 0, len = rng() % 12; k < len; ++k) y.prefix.push_back(rng() & 1);
        y.tail = (rng() & 1) != 0;
        const Verdict v = psi_member(code, y, b);
        const bool in = v.status == VerdictStatus::MemberVerifiedAtBound;
        t.expect(in == direct_member(p, y), tag + " psi disagrees at " + y.str());
        if (v.status == VerdictStatus::NonmemberWitness || v.status == VerdictStatus::Refuted)
          t.expect(witness_revalidates(code, v, &y), tag + " psi witness at " + y.str());
        ++points;
        members += in;
      }
      // Damaged codes: refutations must carry genuine counterexamples.
      Code bad = code;
      if (bad.shape == CodeShape::Flat) bad.flat.insert(BitWord());
      else bad.indexed.insert({1 + static_cast<unsigned>(seed % 4), BitWord()});
      if (ideal == Ideal::EPlus) bad.flat.insert(BitWord());
      const Verdict broken = phi_check(bad, 8);
      if (broken.status == VerdictStatus::Refuted) {
        ++refutations;
        t.expect(witness_revalidates(bad, broken), tag + " refutation witness: " + describe(broken));
      }
    }
  }
  t.expect(refutations >= 300, "too few damaged codes refuted: " + std::to_string(refutations));
  return "600 presentations, " + std::to_string(points) + " points (" + std::to_string(members) + " members), " +
         std::to_string(refutations) + " refutations re-validated";
}

// ---------------------------------------------------------------- criterion 8
std::string certificate_integrity(Tally& t) {
  struct Case {
    std::string bytes;
    const DenseOpenFamily* fam = nullptr;
    const Filtration* filt = nullptr;
  };
  std::vector<DenseOpenFamily> fams{random_dense_open(81, DenseOpenParams{8, 4, 3}), codiagonal_family(8, 4)};
  std::vector<Filtration> filts{random_filtration(82, FiltrationParams{5, 6}), random_filtration(83, FiltrationParams{6, 6})};
  std::vector<Case> pool;
  for (const auto& fam : fams) {
    auto oracle = oracle_from_family(fam);
    for (int v = 0; v < 3; ++v) {
      auto runner = [&] {
        return v == 0 ? silver_category_inscribe(*oracle, 3)
               : v == 1 ? spinas_category_inscribe(*oracle, 2)
                        : uniform_mycielski_category_inscribe(*oracle, 3);
      };
      const std::string a = serialize(runner().certificate);
      t.expect(a == serialize(runner().certificate), "category rerun not byte-identical");
      pool.push_back({a, &fam, nullptr});
    }
  }
  for (const auto& filt : filts) {
    for (bool uniform : {false, true}) {
      auto runner = [&] { return uniform ? uniform_mycielski_measure_inscribe(filt, 2) : silver_measure_inscribe(filt, 2); };
      const std::string a = serialize(runner().certificate);
      t.expect(a == serialize(runner().certificate), "measure rerun not byte-identical");
      pool.push_back({a, nullptr, &filt});
    }
  }
  std::mt19937_64 rng(8008);
  std::size_t changed = 0, detected = 0;
  for (int i = 0; i < 500; ++i) {
    const Case& c = pool[i % pool.size()];
    Json doc = Json::parse(c.bytes);
    const std::string label = mutation::mutate(doc, rng);
    const auto outcome = c.fam ? mutation::classify(doc, c.bytes, *c.fam) : mutation::classify(doc, c.bytes, *c.filt);
    if (outcome == mutation::Outcome::Unchanged) continue;
    ++changed;
    detected += outcome == mutation::Outcome::Detected;
    t.expect(outcome == mutation::Outcome::Detected, "missed mutation: " + label);
  }
  return std::to_string(detected) + "/" + std::to_string(changed) + " semantics-changing mutations detected out of 500";
}

}  // namespace

int main() {
  report(1, "density filter oracle", density_filter_oracle, 10);
  report(2, "category Silver", silver_category, 30);
  report(3, "category Spinas", spinas_category);
  report(4, "uniform category", uniform_category);
  report(5, "measure Silver", silver_measure);
  report(6, "uniform measure", uniform_measure);
  report(7, "codings round trip", codings_round_trip, 10);
  report(8, "certificate integrity", certificate_integrity);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << '\n';
  return failures == 0 ? 0 : 1;
}
