#include "cantor/measengine.hpp"

#include <algorithm>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

/// [σ]×H at depth d.
ClopenSet product(const BitWord& sigma, const ClopenSet& h, unsigned d) {
  ClopenSet out(2, d);
  const ClopenSet hd = h.refined(std::max(d, h.depth()));
  for (const auto& col : hd.cells1()) out.insert_rectangle(sigma, col);
  return out;
}

Rational one_minus(const Rational& e) { return Rational(1) - e; }

[[noreturn]] void rethrow_with_stage(const Error& e, unsigned k) {
  throw Error(e.kind(), "stage " + std::to_string(k) + ": " + e.detail());
}

/// Least n with λ(F_n ∩ [σ_τ]×[ρ]) > (1-ε²)2^{-2N} for every τ and every ρ ∈ 2^N,
/// plus λ(F_n ∩ [σ_τ]²) > (1-ε)2^{-2N} for the uniform variant.
unsigned select_index(const Filtration& filt, const std::map<BitWord, BitWord>& sigma, unsigned N,
                      const Rational& eps, bool uniform) {
  const Rational cell = Dyadic::unit(2 * N).to_rational();
  const Rational strict = one_minus(eps * eps) * cell;
  const Rational diag = one_minus(eps) * cell;
  for (std::size_t n = 0; n < filt.size(); ++n) {
    const ClopenSet& f = filt[n];
    bool ok = true;
    for (auto it = sigma.begin(); ok && it != sigma.end(); ++it) {
      const BitWord& s = it->second;
      if (N >= f.depth()) {
        // Every [σ]×[ρ] sits inside one cell, so the bound means full containment.
        ok = f.contains_rectangle(s, BitWord());
      } else {
        for (const auto& rho : all_words(N)) {
          if (!(f.measure_in_rectangle(s, rho) > strict)) {
            ok = false;
            break;
          }
        }
      }
      if (ok && uniform) ok = f.measure_in_rectangle(s, s) > diag;
    }
    if (ok) return static_cast<unsigned>(n);
  }
  throw Error(ErrorKind::InsufficientFiltration, "no index meets the density bound at N = " + std::to_string(N));
}

struct Ctx {
  const Filtration& filt;
  bool uniform;
  std::vector<MeasureStageRecord> records;
};

/// Stage k+1 at working depth W. Throws NoOffDiagonalCell when the uniform pair
/// pick fails so the caller can retry deeper.
MeasureStageRecord advance(const Ctx& ctx, unsigned W) {
  const MeasureStageRecord& cur = ctx.records.back();
  const unsigned k = cur.k;
  const Rational& eps = cur.eps;

  std::vector<ClopenSet> fw;  // F_{n_j} at depth W, j <= k
  std::vector<ClopenSet> hw;  // H_{j,k} at depth W
  for (unsigned j = 0; j <= k; ++j) {
    fw.push_back(ctx.filt[ctx.records[j].n_index].refined(W));
    hw.push_back(cur.H[j].refined(W));
  }

  MeasureStageRecord next;
  next.k = k + 1;
  next.N = W;
  next.eps = epsilon(k + 1);

  std::map<BitWord, ClopenSet> xtau;
  for (const auto& [tau, s] : cur.sigma) {
    ClopenSet acc = ClopenSet::full(1, W);
    for (unsigned j = 0; j <= k; ++j) {
      const ClopenSet fp = set_intersect(fw[j], product(s, hw[j], W));
      const ClopenSet x = density_filter(fp, s, hw[j], eps);
      next.slices.push_back({j, tau, x.measure()});
      acc = set_intersect(acc, x);
    }
    xtau.emplace(tau, std::move(acc));
  }

  ClopenSet pick_set = ClopenSet::full(1, W);
  if (!ctx.uniform) {
    for (const auto& [tau, s] : cur.sigma)
      for (bool i : {false, true}) pick_set = set_intersect(pick_set, translate(xtau.at(tau), s.appended(i)));
    next.pick_set_measure = pick_set.measure();
    const auto first = pick_set.first_cell();
    if (!first) throw Error(ErrorKind::EmptyPick, "translate intersection is empty at depth " + std::to_string(W));
    const BitWord x = BitWord::from_index(*first, W);
    next.picks = {x};
    for (const auto& [tau, s] : cur.sigma)
      for (bool i : {false, true}) next.sigma[tau.appended(i)] = word_add(x, s.appended(i));
  } else {
    for (const auto& [tau, s] : cur.sigma) pick_set = set_intersect(pick_set, translate(xtau.at(tau), s));
    next.pick_set_measure = pick_set.measure();

    // Same-child pairs below distinct parents must already land in F.
    ClopenSet restricted(1, W);
    for (const auto& x : pick_set.cells1()) {
      bool ok = true;
      for (auto a = cur.sigma.begin(); ok && a != cur.sigma.end(); ++a) {
        for (auto b = cur.sigma.begin(); ok && b != cur.sigma.end(); ++b) {
          if (a == b) continue;
          const unsigned level = ctx.records[first_difference(a->first, b->first)].n_index;
          ok = ctx.filt[level].contains(word_add(x, a->second).prefix(ctx.filt.depth()),
                                        word_add(x, b->second).prefix(ctx.filt.depth()));
        }
      }
      if (ok) restricted.insert(x);
    }

    ClopenSet r = ClopenSet::full(2, W);
    for (const auto& [t, st] : cur.sigma) {
      for (const auto& [u, su] : cur.sigma) {
        const std::size_t split = t == u ? k : first_difference(t, u);
        const ClopenSet f = ctx.filt[ctx.records[split].n_index].refined(W);
        const ClopenSet local = set_intersect(ClopenSet::rectangle(st, su, W), f);
        r = set_intersect(r, symmetrize(translate(local, st, su)));
      }
    }
    next.pair_set_measure = r.measure();
    const auto [x0, x1] = symmetric_positive_pair(r, restricted);
    next.picks = {x0, x1};
    for (const auto& [tau, s] : cur.sigma) {
      next.sigma[tau.appended(false)] = word_add(x0, s);
      next.sigma[tau.appended(true)] = word_add(x1, s);
    }
  }

  const Rational delta = next.eps * next.eps;
  for (unsigned j = 0; j <= k; ++j) {
    ClopenSet h = hw[j];
    for (const auto& [tau, x] : next.sigma) h = set_intersect(h, good_columns(fw[j], x, W, delta));
    next.H.push_back(std::move(h));
  }
  next.H.push_back(ClopenSet::full(1, W));
  return next;
}

MeasureRun run_measure(const Filtration& filt, unsigned stages, bool uniform) {
  if (filt.size() == 0) throw Error(ErrorKind::PreconditionFailed, "empty filtration");
  Ctx ctx{filt, uniform, {}};
  const unsigned cap = depth_caps().for_dim(2);

  MeasureStageRecord first;
  first.k = 0;
  first.N = 0;
  first.eps = epsilon(0);
  first.sigma = {{BitWord(), BitWord()}};
  first.H = {ClopenSet::full(1, 0)};
  try {
    first.n_index = select_index(filt, first.sigma, 0, first.eps, uniform);
  } catch (const Error& e) {
    rethrow_with_stage(e, 0);
  }
  ctx.records.push_back(std::move(first));

  for (unsigned k = 0; k < stages; ++k) {
    const MeasureStageRecord& cur = ctx.records.back();
    MeasureStageRecord next;
    try {
      for (unsigned W = std::max(cur.N + 1, filt.depth());; ++W) {
        if (W > cap) throw Error(ErrorKind::DepthCapExceeded, "working depth " + std::to_string(W) + " exceeds cap");
        try {
          next = advance(ctx, W);
          break;
        } catch (const Error& e) {
          if (!uniform || e.kind() != ErrorKind::NoOffDiagonalCell || W + 1 > cap) throw;
        }
      }
      next.n_index = select_index(filt, next.sigma, next.N, next.eps, uniform);
    } catch (const Error& e) {
      rethrow_with_stage(e, k + 1);
    }
    ctx.records.push_back(std::move(next));
  }

  MeasureRun run;
  run.stages = ctx.records;
  run.skeleton.levels = stages;
  for (const auto& rec : run.stages)
    for (const auto& [tau, s] : rec.sigma) run.skeleton.stems[tau] = s;

  Certificate& c = run.certificate;
  c.variant = uniform ? Variant::UniformMeas : Variant::SilverMeas;
  c.input_digest = instance_digest(filt);
  c.stages = stages;
  c.filtration_depth = filt.depth();
  c.measure = run.stages;
  c.skeleton = run.skeleton;
  fill_summary(c);
  return run;
}

}  // namespace

ClopenSet density_filter(const ClopenSet& f, const BitWord& sigma, const ClopenSet& h, const Rational& eps) {
  if (f.dim() != 2 || h.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "density_filter needs F in dim 2, H in dim 1");
  const unsigned d = std::max({f.depth(), h.depth(), static_cast<unsigned>(sigma.size())});
  const ClopenSet fd = f.refined(d);
  const ClopenSet hd = h.refined(d);
  const ClopenSet box = product(sigma, hd, d);
  if (!fd.subset_of(box)) throw Error(ErrorKind::PreconditionFailed, "F is not inside [sigma] x H");
  const Rational hm = hd.measure().to_rational();
  if (!(fd.measure() > one_minus(eps * eps) * box.measure().to_rational()))
    throw Error(ErrorKind::PreconditionFailed, "F is not dense enough in [sigma] x H");
  const Rational bound = one_minus(eps) * hm;
  ClopenSet out(1, d);
  const unsigned free = d - static_cast<unsigned>(sigma.size());
  for (const auto& tail : all_words(free)) {
    const BitWord w = sigma.concat(tail);
    // λ of the section is 2^{|w|} times the measure inside the row.
    const Dyadic row = fd.measure_in_rectangle(w, BitWord()) * Dyadic(BigInt(1) << d, 0);
    if (row > bound) out.insert(w);
  }
  return out;
}

ClopenSet good_columns(const ClopenSet& f, const BitWord& x, unsigned n, const Rational& delta) {
  if (f.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "good_columns needs dim 2");
  if (x.size() < n) throw Error(ErrorKind::BadLength, "good_columns: |x| < n");
  const BitWord row = x.prefix(n);
  const Rational bound = one_minus(delta) * Dyadic::unit(2 * n).to_rational();
  ClopenSet out(1, n);
  for (const auto& tau : all_words(n))
    if (f.measure_in_rectangle(row, tau) > bound) out.insert(tau);
  return out;
}

std::pair<BitWord, BitWord> symmetric_positive_pair(const ClopenSet& r, const ClopenSet& x) {
  if (r.dim() != 2 || x.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "symmetric_positive_pair needs R in dim 2, X in dim 1");
  const unsigned d = std::max(r.depth(), x.depth());
  const ClopenSet rd = r.refined(d);
  const auto cells = x.refined(d).cells1();
  for (const auto& a : cells)
    for (const auto& b : cells)
      if (a != b && rd.contains(a, b)) return {a, b};
  throw Error(ErrorKind::NoOffDiagonalCell, "no off-diagonal cell of R over X at depth " + std::to_string(d));
}

MeasureRun silver_measure_inscribe(const Filtration& filt, unsigned stages) { return run_measure(filt, stages, false); }

MeasureRun uniform_mycielski_measure_inscribe(const Filtration& filt, unsigned stages) {
  return run_measure(filt, stages, true);
}

}  // namespace cantor
