#pragma once

// Brute-force reference computations over integer cell indices. They share no
// code with the engines beyond ClopenSet membership and construction.

#include <algorithm>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "cantor/clopen.hpp"
#include "cantor/dyadic.hpp"

namespace oracle {

using cantor::BigInt;
using cantor::BitWord;
using cantor::ClopenSet;
using cantor::Rational;

inline bool extends(std::uint64_t cell, unsigned depth, const BitWord& w) {
  return w.size() <= depth && (cell >> (depth - w.size())) == w.to_index();
}

/// Cells x ⊇ σ at depth d with #{y ∈ H : (x, y) ∈ F} > (1-ε)·#H.
inline ClopenSet density_filter(const ClopenSet& f, const BitWord& sigma, const ClopenSet& h, const Rational& eps) {
  const unsigned d = f.depth();
  const ClopenSet hd = h.refined(d);
  std::uint64_t hcount = 0;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << d); ++y) hcount += hd.contains_cell(y);
  ClopenSet out(1, d);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << d); ++x) {
    if (!extends(x, d, sigma)) continue;
    std::uint64_t row = 0;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << d); ++y)
      if (hd.contains_cell(y) && f.contains_cell((x << d) + y)) ++row;
    if (Rational(BigInt(row)) > (1 - eps) * Rational(BigInt(hcount))) out.insert_cell(x);
  }
  return out;
}

/// τ ∈ 2^n with λ(F ∩ [x↾n]×[τ]) > (1-δ)·2^{-2n}, counted on cells at depth max(n, d).
inline ClopenSet good_columns(const ClopenSet& f, const BitWord& x, unsigned n, const Rational& delta) {
  const unsigned e = std::max(n, f.depth());
  const ClopenSet fe = f.refined(e);
  const std::uint64_t row = x.prefix(n).to_index();
  const unsigned extra = e - n;
  const std::uint64_t block = std::uint64_t{1} << (2 * extra);
  ClopenSet out(1, n);
  for (std::uint64_t t = 0; t < (std::uint64_t{1} << n); ++t) {
    std::uint64_t hits = 0;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << extra); ++a)
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << extra); ++b)
        hits += fe.contains_cell((((row << extra) + a) << e) + ((t << extra) + b));
    if (Rational(BigInt(hits)) > (1 - delta) * Rational(BigInt(block))) out.insert_cell(t);
  }
  return out;
}

/// Lexicographically least (x0, x1), x0 ≠ x1, with x0, x1 ∈ X and (x0, x1) ∈ R.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> symmetric_pair(const ClopenSet& r, const ClopenSet& x) {
  const unsigned d = std::max(r.depth(), x.depth());
  const ClopenSet rd = r.refined(d);
  const ClopenSet xd = x.refined(d);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << d); ++a)
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << d); ++b)
      if (a != b && xd.contains_cell(a) && xd.contains_cell(b) && rd.contains_cell((a << d) + b))
        return std::make_pair(a, b);
  return std::nullopt;
}

struct DensityInstance {
  ClopenSet f;
  BitWord sigma;
  ClopenSet h;
  Rational eps;
};

/// F = [σ]×H minus fewer than ε²·#([σ]×H) cells, so the density hypothesis holds.
inline DensityInstance random_density_instance(std::mt19937_64& rng, unsigned max_depth = 6) {
  DensityInstance in;
  const unsigned d = 2 + rng() % (max_depth - 1);
  in.sigma = BitWord();
  for (unsigned i = 0, l = rng() % d; i < l; ++i) in.sigma.push_back(rng() & 1);
  in.h = ClopenSet(1, d);
  for (std::uint64_t y = 0; y < in.h.cell_count(); ++y)
    if (rng() % 4 != 0) in.h.insert_cell(y);
  if (in.h.is_empty()) in.h.insert_cell(rng() % in.h.cell_count());
  static const Rational choices[] = {Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 8)};
  in.eps = choices[rng() % 4];
  in.f = ClopenSet(2, d);
  std::vector<std::uint64_t> cells;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << d); ++x)
    if (extends(x, d, in.sigma))
      for (std::uint64_t y = 0; y < (std::uint64_t{1} << d); ++y)
        if (in.h.contains_cell(y)) {
          in.f.insert_cell((x << d) + y);
          cells.push_back((x << d) + y);
        }
  // Remove t cells with t < ε²·|cells|; the knockouts cluster in a few rows so
  // that some rows fall below the threshold.
  Rational cap = in.eps * in.eps * Rational(BigInt(cells.size()));
  std::uint64_t t = 0;
  while (Rational(BigInt(t + 1)) < cap) ++t;
  if (t > 0) t = rng() % (t + 1);
  std::shuffle(cells.begin(), cells.end(), rng);
  std::sort(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(std::min<std::uint64_t>(cells.size(), 4 * t)));
  for (std::uint64_t i = 0; i < t; ++i) in.f.erase_cell(cells[i]);
  return in;
}

}  // namespace oracle
