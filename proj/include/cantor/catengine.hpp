#pragma once

#include <map>
#include <vector>

#include "cantor/certificate.hpp"
#include "cantor/largesets.hpp"
#include "cantor/trees.hpp"

namespace cantor {

struct CategoryRun {
  TreeSkeleton skeleton;
  std::vector<CategoryStageRecord> stages;
  Certificate certificate;
};

/// Stages 0..K of the Silver inscription. Stage n shrinks a common tail α and
/// column word v over i ∈ 2^n in lex order, querying extend(n, τ(i)⌢α, v).
CategoryRun silver_category_inscribe(const ExtensionOracle& oracle, unsigned stages);

/// As above over all (i, j) ∈ 2^n × 2^n, each query flip-symmetrized from |τ(i, j)|
/// so that both τ_n and its complement twin are covered.
CategoryRun spinas_category_inscribe(const ExtensionOracle& oracle, unsigned stages);

/// Shrinks every ordered pair (τ, τ'), τ ≠ τ', in lex order so that
/// [σ_τ]×[σ_τ'] ⊆ U_level, then pads all words with zeros to a common length.
std::map<BitWord, BitWord> pairwise_shrink(const ExtensionOracle& oracle, const std::map<BitWord, BitWord>& family,
                                           std::size_t level, std::vector<OracleQuery>* log = nullptr);

/// Uniformly perfect inscription modulo the diagonal: the lex-ordered W chain
/// followed by pairwise_shrink at every stage.
CategoryRun uniform_mycielski_category_inscribe(const ExtensionOracle& oracle, unsigned stages);

}  // namespace cantor
