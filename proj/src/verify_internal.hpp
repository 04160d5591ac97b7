#pragma once

// Helpers shared by the condition checks and the replay. None of these call
// into the construction engines.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cantor/certificate.hpp"
#include "cantor/largesets.hpp"
#include "cantor/verify.hpp"

namespace cantor::vdetail {

struct VerifyFailure {
  VerifyReport report;
};

[[noreturn]] void fail(const std::string& condition, int stage, const std::string& detail);

/// 1 / (2^{2k+2} (k+1)).
Rational eps_of(unsigned k);

/// First generator of level n comparable with both words, joined with them.
std::optional<std::pair<BitWord, BitWord>> scan_generators(const DenseOpenFamily& family, std::size_t n,
                                                           const BitWord& a, const BitWord& b);

/// [a]×[b] ⊆ ⋃ gens, decided by splitting the shorter side until both sides
/// reach the longest generator word.
bool rect_covered(const std::vector<Rect>& gens, const BitWord& a, const BitWord& b);

/// λ(F ∩ [a]×[b]) by direct enumeration of the cells of F below the rectangle.
Dyadic rect_measure(const ClopenSet& f, const BitWord& a, const BitWord& b);

/// Re-runs the construction named by claimed.variant for claimed.stages stages.
/// Fails with condition "canonical" if the run cannot complete.
Certificate replay_category(const Certificate& claimed, const DenseOpenFamily& family);
Certificate replay_measure(const Certificate& claimed, const Filtration& filt);

}  // namespace cantor::vdetail
