#pragma once

#include <utility>
#include <vector>

#include "cantor/certificate.hpp"
#include "cantor/clopen.hpp"
#include "cantor/largesets.hpp"
#include "cantor/trees.hpp"

namespace cantor {

/// Rows w ⊇ σ at the working depth whose section has measure > (1-ε)λ(H).
/// Requires F ⊆ [σ]×H and λ(F) > (1-ε²)λ([σ]×H); throws PreconditionFailed.
ClopenSet density_filter(const ClopenSet& f, const BitWord& sigma, const ClopenSet& h, const Rational& eps);

/// {τ ∈ 2^n : λ(F ∩ [x↾n]×[τ]) > (1-δ)2^{-2n}} as a dim-1 set at depth n.
ClopenSet good_columns(const ClopenSet& f, const BitWord& x, unsigned n, const Rational& delta);

/// Lexicographically least (x0, x1) with x0 ≠ x1, both cells of X, and (x0, x1) ∈ R.
/// Throws NoOffDiagonalCell.
std::pair<BitWord, BitWord> symmetric_positive_pair(const ClopenSet& r, const ClopenSet& x);

struct MeasureRun {
  TreeSkeleton skeleton;
  std::vector<MeasureStageRecord> stages;
  Certificate certificate;
};

/// Stages 0..K of the Silver measure inscription. Stage k+1 works at depth
/// N_{k+1} = max(N_k + 1, depth of the filtration).
MeasureRun silver_measure_inscribe(const Filtration& filt, unsigned stages);

/// Uniformly perfect inscription modulo the diagonal. The pair pick is
/// restricted to points x for which every same-branch translate pair
/// (x+σ_α, x+σ_β) also lands in F_{n_{d(α,β)}}; the working depth grows past
/// max(N_k + 1, depth) only when no off-diagonal pair exists.
MeasureRun uniform_mycielski_measure_inscribe(const Filtration& filt, unsigned stages);

}  // namespace cantor
