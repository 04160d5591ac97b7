// Independent re-execution of the five constructions. Words are handled as
// integer cell indices at the working depth wherever possible, so the code
// shares no set algebra with the engines.

#include <algorithm>
#include <cstdint>

#include "cantor/errors.hpp"
#include "verify_internal.hpp"

namespace cantor::vdetail {

void fail(const std::string& condition, int stage, const std::string& detail) {
  throw VerifyFailure{VerifyReport{false, condition, stage, detail}};
}

Rational eps_of(unsigned k) {
  BigInt den = BigInt(1) << (2 * k + 2);
  den *= (k + 1);
  return Rational(BigInt(1), den);
}

std::optional<std::pair<BitWord, BitWord>> scan_generators(const DenseOpenFamily& family, std::size_t n,
                                                           const BitWord& a, const BitWord& b) {
  if (n >= family.levels.size()) return std::nullopt;
  for (const Rect& g : family.levels[n]) {
    if (!g.a.comparable(a) || !g.b.comparable(b)) continue;
    return std::make_pair(g.a.size() > a.size() ? g.a : a, g.b.size() > b.size() ? g.b : b);
  }
  return std::nullopt;
}

bool rect_covered(const std::vector<Rect>& gens, const BitWord& a, const BitWord& b) {
  std::size_t res = 0;
  for (const Rect& g : gens) res = std::max({res, g.a.size(), g.b.size()});
  // Depth-first over the sub-rectangles still to be decided.
  std::vector<std::pair<BitWord, BitWord>> pending{{a, b}};
  while (!pending.empty()) {
    auto [x, y] = pending.back();
    pending.pop_back();
    const bool inside = std::any_of(gens.begin(), gens.end(), [&](const Rect& g) {
      return g.a.is_prefix_of(x) && g.b.is_prefix_of(y);
    });
    if (inside) continue;
    if (x.size() >= res && y.size() >= res) return false;
    if (x.size() <= y.size() && x.size() < res) {
      pending.emplace_back(x.appended(true), y);
      pending.emplace_back(x.appended(false), y);
    } else {
      pending.emplace_back(x, y.appended(true));
      pending.emplace_back(x, y.appended(false));
    }
  }
  return true;
}

Dyadic rect_measure(const ClopenSet& f, const BitWord& a, const BitWord& b) {
  const unsigned d = f.depth();
  const unsigned la = static_cast<unsigned>(std::min<std::size_t>(a.size(), d));
  const unsigned lb = static_cast<unsigned>(std::min<std::size_t>(b.size(), d));
  const std::uint64_t a0 = a.prefix(la).to_index() << (d - la);
  const std::uint64_t b0 = b.prefix(lb).to_index() << (d - lb);
  std::uint64_t hits = 0;
  for (std::uint64_t u = 0; u < (std::uint64_t{1} << (d - la)); ++u)
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << (d - lb)); ++v)
      hits += f.contains_cell(((a0 + u) << d) + (b0 + v)) ? 1 : 0;
  const unsigned scale = static_cast<unsigned>(std::max<std::size_t>(a.size(), d) + std::max<std::size_t>(b.size(), d));
  return Dyadic(BigInt(hits), scale);
}

namespace {

bool bit_at(std::uint64_t idx, unsigned len, unsigned k) { return ((idx >> (len - 1 - k)) & 1U) != 0; }

BitWord base_word(std::size_t n) {
  unsigned len = 0;
  std::size_t rest = n;
  while (rest >= (std::size_t{1} << len)) rest -= std::size_t{1} << len, ++len;
  return BitWord::from_index(rest, len);
}

class Asker {
 public:
  Asker(const DenseOpenFamily& family, unsigned stage, std::vector<OracleQuery>& log)
      : family_(family), stage_(stage), log_(log) {}
  std::pair<BitWord, BitWord> operator()(std::size_t n, const BitWord& s, const BitWord& r) {
    auto ans = scan_generators(family_, n, s, r);
    if (!ans) fail("canonical", static_cast<int>(stage_), "replay: level " + std::to_string(n) + " cannot extend " + s.str() + " x " + r.str());
    log_.push_back({n, s, r, ans->first, ans->second});
    return *ans;
  }

 private:
  const DenseOpenFamily& family_;
  unsigned stage_;
  std::vector<OracleQuery>& log_;
};

/// τ_0^{j_0} i_0 ... τ_{n-1}^{j_{n-1}} i_{n-1}; j is ignored when twins is false.
BitWord branch(const std::vector<BitWord>& taus, std::uint64_t i, std::uint64_t j, unsigned n, bool twins) {
  BitWord out;
  for (unsigned k = 0; k < n; ++k) {
    const bool flip = twins && bit_at(j, n, k);
    for (std::size_t p = 0; p < taus[k].size(); ++p) out.push_back(taus[k][p] != flip);
    out.push_back(bit_at(i, n, k));
  }
  return out;
}

BitWord complement_from(const BitWord& w, std::size_t from) {
  BitWord out;
  for (std::size_t p = 0; p < w.size(); ++p) out.push_back(p >= from ? !w[p] : w[p]);
  return out;
}

Certificate replay_tails(const Certificate& claimed, const DenseOpenFamily& family, bool twins) {
  Certificate c;
  c.variant = claimed.variant;
  c.input_digest = claimed.input_digest;
  c.stages = claimed.stages;
  const unsigned K = claimed.stages;
  std::vector<BitWord> taus;
  for (unsigned n = 0; n <= K; ++n) {
    CategoryStageRecord rec;
    rec.n = n;
    rec.base = base_word(n);
    Asker ask(family, n, rec.queries);
    BitWord alpha;
    BitWord v = rec.base;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t i = 0; i < count; ++i) {
      for (std::uint64_t j = 0; j < (twins ? count : 1); ++j) {
        const BitWord head = branch(taus, i, j, n, twins);
        const std::size_t from = head.size();
        BitWord s;
        if (twins) {
          auto [s1, r1] = ask(n, head.concat(alpha), v);
          auto [s2, r2] = ask(n, complement_from(s1, from), r1);
          s = complement_from(s2, from);
          v = r2;
        } else {
          auto [s1, r1] = ask(n, head.concat(alpha), v);
          s = s1;
          v = r1;
        }
        alpha = s.suffix_from(from);
      }
    }
    taus.push_back(alpha);
    rec.tau = alpha;
    rec.v = v;
    c.category.push_back(std::move(rec));
  }

  c.skeleton.levels = K;
  std::map<BitWord, BranchLabel> labels;
  for (unsigned n = 0; n <= K; ++n) {
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t i = 0; i < count; ++i) {
      if (!twins) {
        c.skeleton.stems[BitWord::from_index(i, n)] = branch(taus, i, 0, n, false).concat(taus[n]);
        continue;
      }
      for (std::uint64_t j = 0; j < 2 * count; ++j) {
        const bool last = (j & 1U) != 0;
        BitWord stem = branch(taus, i, j >> 1, n, true).concat(last ? complement_from(taus[n], 0) : taus[n]);
        BitWord addr;
        for (unsigned k = 0; k < n; ++k) {
          addr.push_back(bit_at(j, n + 1, k));
          addr.push_back(bit_at(i, n, k));
        }
        addr.push_back(last);
        c.skeleton.stems[addr] = std::move(stem);
        labels[addr] = BranchLabel{BitWord::from_index(i, n), BitWord::from_index(j, n + 1)};
      }
    }
  }
  if (twins) c.skeleton.labels = std::move(labels);
  fill_summary(c);
  return c;
}

Certificate replay_uniform_category(const Certificate& claimed, const DenseOpenFamily& family) {
  Certificate c;
  c.variant = claimed.variant;
  c.input_digest = claimed.input_digest;
  c.stages = claimed.stages;
  const unsigned K = claimed.stages;
  std::vector<BitWord> sigma;
  for (unsigned n = 0; n <= K; ++n) {
    CategoryStageRecord rec;
    rec.n = n;
    rec.base = base_word(n);
    Asker ask(family, n, rec.queries);
    if (n == 0) {
      auto [s, r] = ask(0, BitWord(), rec.base);
      sigma = {s};
      rec.v = r;
    } else {
      BitWord w = rec.base;
      std::vector<BitWord> pre(sigma.size() * 2);
      for (std::size_t t = 0; t < sigma.size(); ++t) {
        for (unsigned i = 0; i < 2; ++i) {
          auto [s, r] = ask(n, sigma[t].appended(i == 1), w);
          pre[2 * t + i] = s;
          w = r;
          rec.chain.push_back(w);
        }
      }
      rec.v = w;
      std::vector<BitWord> cur = pre;
      for (std::size_t a = 0; a < cur.size(); ++a) {
        for (std::size_t b = 0; b < cur.size(); ++b) {
          if (a == b) continue;
          auto [sa, sb] = ask(n, cur[a], cur[b]);
          cur[a] = sa;
          cur[b] = sb;
        }
      }
      std::size_t len = 0;
      for (const auto& s : cur) len = std::max(len, s.size());
      for (auto& s : cur) {
        while (s.size() < len) s.push_back(false);
      }
      for (std::size_t t = 0; t < pre.size(); ++t) rec.sigma_pre[BitWord::from_index(t, n)] = pre[t];
      sigma = cur;
    }
    for (std::size_t t = 0; t < sigma.size(); ++t) {
      rec.sigma[BitWord::from_index(t, n)] = sigma[t];
      c.skeleton.stems[BitWord::from_index(t, n)] = sigma[t];
    }
    c.category.push_back(std::move(rec));
  }
  c.skeleton.levels = K;
  fill_summary(c);
  return c;
}

// ---- measure side ----

struct Level {
  unsigned N = 0;
  std::vector<std::uint64_t> sigma;  // σ_τ as indices of length N, τ in index order
  std::vector<std::vector<char>> H;  // H_{j,k} as bitmaps over 2^N
  unsigned n_index = 0;
};

class MeasureReplay {
 public:
  MeasureReplay(const Filtration& filt, bool uniform) : filt_(filt), uniform_(uniform), d_(filt.depth()) {}

  /// Cell (u, v) at depth W >= d lies in F_n.
  bool in_f(unsigned n, std::uint64_t u, std::uint64_t v, unsigned W) const {
    const unsigned sh = W - d_;
    return filt_[n].contains_cell(((u >> sh) << d_) + (v >> sh));
  }

  unsigned select(const Level& lv, const Rational& eps, int stage) const {
    const Rational cell(BigInt(1), BigInt(1) << (2 * lv.N));
    for (std::size_t n = 0; n < filt_.size(); ++n) {
      bool ok = true;
      for (std::size_t t = 0; ok && t < lv.sigma.size(); ++t) {
        const BitWord s = BitWord::from_index(lv.sigma[t], lv.N);
        for (std::uint64_t r = 0; ok && r < (std::uint64_t{1} << lv.N); ++r) {
          ok = rect_measure(filt_[n], s, BitWord::from_index(r, lv.N)).to_rational() > (1 - eps * eps) * cell;
        }
        if (ok && uniform_) ok = rect_measure(filt_[n], s, s).to_rational() > (1 - eps) * cell;
      }
      if (ok) return static_cast<unsigned>(n);
    }
    fail("canonical", stage, "replay: no filtration index meets the density bound at N = " + std::to_string(lv.N));
  }

  /// One stage at working depth W; returns false when the uniform pair pick finds nothing.
  bool step(const std::vector<Level>& done, unsigned W, MeasureStageRecord& out, Level& next) const {
    const Level& cur = done.back();
    const unsigned k = static_cast<unsigned>(done.size()) - 1;
    const Rational eps = eps_of(k);
    const unsigned gap = W - cur.N;
    const std::uint64_t cells = std::uint64_t{1} << W;
    const int stage = static_cast<int>(k + 1);

    std::vector<std::vector<char>> hw(k + 1, std::vector<char>(cells));
    std::vector<std::uint64_t> hcount(k + 1, 0);
    for (unsigned j = 0; j <= k; ++j)
      for (std::uint64_t r = 0; r < cells; ++r) hcount[j] += (hw[j][r] = cur.H[j][r >> gap]);

    out = MeasureStageRecord{};
    out.k = k + 1;
    out.N = W;
    out.eps = eps_of(k + 1);

    std::vector<std::vector<char>> xt(cur.sigma.size(), std::vector<char>(cells, 1));
    for (std::size_t t = 0; t < cur.sigma.size(); ++t) {
      std::vector<char> inside(cells, 0);
      const std::uint64_t lo = cur.sigma[t] << gap;
      const std::uint64_t hi = lo + (std::uint64_t{1} << gap);
      for (std::uint64_t w = lo; w < hi; ++w) inside[w] = 1;
      for (unsigned j = 0; j <= k; ++j) {
        const unsigned nj = done[j].n_index;
        std::vector<std::uint64_t> row(cells, 0);
        BigInt total = 0;
        for (std::uint64_t w = lo; w < hi; ++w) {
          for (std::uint64_t v = 0; v < cells; ++v) row[w] += (hw[j][v] && in_f(nj, w, v, W)) ? 1 : 0;
          total += row[w];
        }
        const Rational box = Rational(BigInt(hcount[j]) * (BigInt(1) << gap));
        if (!(Rational(total) > (1 - eps * eps) * box)) {
          fail("canonical", stage, "replay: density precondition fails for j = " + std::to_string(j));
        }
        std::uint64_t size = 0;
        for (std::uint64_t w = 0; w < cells; ++w) {
          const bool keep = inside[w] && Rational(BigInt(row[w])) > (1 - eps) * Rational(BigInt(hcount[j]));
          size += keep ? 1 : 0;
          if (!keep) xt[t][w] = 0;
        }
        out.slices.push_back({j, BitWord::from_index(t, k), Dyadic(BigInt(size), W)});
      }
    }

    std::vector<std::uint64_t> picks;
    next = Level{};
    next.N = W;
    if (!uniform_) {
      std::vector<std::uint64_t> masks;  // σ_τ⌢i padded to W, at index 2t + i
      for (auto s : cur.sigma)
        for (std::uint64_t i = 0; i < 2; ++i) masks.push_back(((s << 1) | i) << (gap - 1));
      std::uint64_t size = 0;
      std::optional<std::uint64_t> first;
      for (std::uint64_t x = 0; x < cells; ++x) {
        bool ok = true;
        for (std::size_t m = 0; ok && m < masks.size(); ++m) ok = xt[m / 2][x ^ masks[m]] != 0;
        if (ok) {
          ++size;
          if (!first) first = x;
        }
      }
      out.pick_set_measure = Dyadic(BigInt(size), W);
      if (!first) fail("canonical", stage, "replay: translate intersection is empty");
      picks = {*first};
      for (auto m : masks) next.sigma.push_back(*first ^ m);
    } else {
      std::vector<std::uint64_t> masks;
      for (auto s : cur.sigma) masks.push_back(s << gap);
      std::vector<char> pick(cells, 0);
      std::uint64_t size = 0;
      for (std::uint64_t x = 0; x < cells; ++x) {
        bool ok = true;
        for (std::size_t t = 0; ok && t < masks.size(); ++t) ok = xt[t][x ^ masks[t]] != 0;
        pick[x] = ok;
        size += ok ? 1 : 0;
      }
      out.pick_set_measure = Dyadic(BigInt(size), W);

      auto split_index = [&](std::size_t a, std::size_t b) {
        if (a == b) return done[k].n_index;
        unsigned p = 0;
        while (bit_at(a, k, p) == bit_at(b, k, p)) ++p;
        return done[p].n_index;
      };
      for (std::uint64_t x = 0; x < cells; ++x) {
        if (!pick[x]) continue;
        for (std::size_t a = 0; pick[x] && a < masks.size(); ++a)
          for (std::size_t b = 0; pick[x] && b < masks.size(); ++b)
            if (a != b && !in_f(split_index(a, b), x ^ masks[a], x ^ masks[b], W)) pick[x] = 0;
      }
      const std::uint64_t span = std::uint64_t{1} << gap;  // x must lie in [0^N]
      auto pair_ok = [&](std::uint64_t x0, std::uint64_t x1) {
        if (x0 >= span || x1 >= span) return false;
        for (std::size_t a = 0; a < masks.size(); ++a) {
          for (std::size_t b = 0; b < masks.size(); ++b) {
            const unsigned n = split_index(a, b);
            if (!in_f(n, x0 ^ masks[a], x1 ^ masks[b], W) || !in_f(n, x1 ^ masks[a], x0 ^ masks[b], W)) return false;
          }
        }
        return true;
      };
      std::uint64_t rcount = 0;
      for (std::uint64_t x0 = 0; x0 < span; ++x0)
        for (std::uint64_t x1 = 0; x1 < span; ++x1) rcount += pair_ok(x0, x1) ? 1 : 0;
      out.pair_set_measure = Dyadic(BigInt(rcount), 2 * W);
      std::optional<std::pair<std::uint64_t, std::uint64_t>> found;
      for (std::uint64_t x0 = 0; !found && x0 < span; ++x0) {
        if (!pick[x0]) continue;
        for (std::uint64_t x1 = 0; x1 < span; ++x1) {
          if (x1 != x0 && pick[x1] && pair_ok(x0, x1)) {
            found = std::make_pair(x0, x1);
            break;
          }
        }
      }
      if (!found) return false;
      picks = {found->first, found->second};
      for (auto m : masks) {
        next.sigma.push_back(found->first ^ m);
        next.sigma.push_back(found->second ^ m);
      }
    }
    for (auto p : picks) out.picks.push_back(BitWord::from_index(p, W));

    // W >= d, so every good-column test is a single cell lookup.
    for (unsigned j = 0; j <= k; ++j) {
      std::vector<char> h = hw[j];
      for (std::uint64_t r = 0; r < cells; ++r) {
        if (!h[r]) continue;
        for (auto s : next.sigma) {
          if (!in_f(done[j].n_index, s, r, W)) {
            h[r] = 0;
            break;
          }
        }
      }
      next.H.push_back(std::move(h));
    }
    next.H.emplace_back(cells, 1);
    return true;
  }

  static ClopenSet to_set(const std::vector<char>& bits, unsigned depth) {
    ClopenSet out(1, depth);
    for (std::uint64_t r = 0; r < bits.size(); ++r)
      if (bits[r]) out.insert_cell(r);
    return out;
  }

  static void fill(const Level& lv, unsigned k, MeasureStageRecord& rec) {
    rec.k = k;
    rec.N = lv.N;
    rec.eps = eps_of(k);
    rec.sigma.clear();
    for (std::size_t t = 0; t < lv.sigma.size(); ++t) rec.sigma[BitWord::from_index(t, k)] = BitWord::from_index(lv.sigma[t], lv.N);
    rec.H.clear();
    for (const auto& h : lv.H) rec.H.push_back(to_set(h, lv.N));
    rec.n_index = lv.n_index;
  }

 private:
  const Filtration& filt_;
  bool uniform_;
  unsigned d_;
};

}  // namespace

Certificate replay_category(const Certificate& claimed, const DenseOpenFamily& family) {
  switch (claimed.variant) {
    case Variant::SilverCat: return replay_tails(claimed, family, false);
    case Variant::SpinasCat: return replay_tails(claimed, family, true);
    case Variant::UniformCat: return replay_uniform_category(claimed, family);
    default: throw Error(ErrorKind::MalformedCertificate, "measure certificate given a dense-open family");
  }
}

Certificate replay_measure(const Certificate& claimed, const Filtration& filt) {
  const bool uniform = claimed.variant == Variant::UniformMeas;
  if (filt.size() == 0) fail("canonical", 0, "replay: empty filtration");
  MeasureReplay rp(filt, uniform);
  const unsigned cap = depth_caps().for_dim(2);

  std::vector<Level> done;
  std::vector<MeasureStageRecord> records;
  Level first;
  first.sigma = {0};
  first.H = {std::vector<char>{1}};
  first.n_index = rp.select(first, eps_of(0), 0);
  MeasureStageRecord rec0;
  MeasureReplay::fill(first, 0, rec0);
  records.push_back(std::move(rec0));
  done.push_back(std::move(first));

  for (unsigned k = 0; k < claimed.stages; ++k) {
    MeasureStageRecord rec;
    Level next;
    unsigned W = std::max(done.back().N + 1, filt.depth());
    for (;; ++W) {
      if (W > cap) fail("canonical", static_cast<int>(k + 1), "replay: working depth exceeds the cap");
      if (rp.step(done, W, rec, next)) break;
      if (!uniform || W + 1 > cap) fail("canonical", static_cast<int>(k + 1), "replay: no off-diagonal pair");
    }
    next.n_index = rp.select(next, eps_of(k + 1), static_cast<int>(k + 1));
    auto slices = std::move(rec.slices);
    auto picks = std::move(rec.picks);
    auto pick_measure = rec.pick_set_measure;
    auto pair_measure = rec.pair_set_measure;
    MeasureReplay::fill(next, k + 1, rec);
    rec.slices = std::move(slices);
    rec.picks = std::move(picks);
    rec.pick_set_measure = pick_measure;
    rec.pair_set_measure = pair_measure;
    records.push_back(std::move(rec));
    done.push_back(std::move(next));
  }

  Certificate c;
  c.variant = claimed.variant;
  c.input_digest = claimed.input_digest;
  c.stages = claimed.stages;
  c.filtration_depth = filt.depth();
  c.measure = records;
  c.skeleton.levels = claimed.stages;
  for (const auto& r : records)
    for (const auto& [tau, s] : r.sigma) c.skeleton.stems[tau] = s;
  fill_summary(c);
  return c;
}

}  // namespace cantor::vdetail
