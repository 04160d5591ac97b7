#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cantor/bitword.hpp"
#include "cantor/clopen.hpp"
#include "cantor/dyadic.hpp"
#include "cantor/trees.hpp"
#include "json.hpp"

namespace cantor {

using Json = nlohmann::ordered_json;

enum class Variant { SilverCat, SpinasCat, UniformCat, SilverMeas, UniformMeas };
std::string variant_name(Variant v);
Variant parse_variant(const std::string& text);
constexpr bool is_category(Variant v) {
  return v == Variant::SilverCat || v == Variant::SpinasCat || v == Variant::UniformCat;
}

/// ε_k = 1 / (2^{2k+2} (k+1)).
Rational epsilon(unsigned k);

struct OracleQuery {
  std::size_t level = 0;
  BitWord sigma;
  BitWord rho;
  BitWord sigma_out;
  BitWord rho_out;
  friend bool operator==(const OracleQuery&, const OracleQuery&) = default;
};

struct CategoryStageRecord {
  unsigned n = 0;
  /// Canonical base cylinder S_n (= B_n).
  BitWord base;
  /// τ_n; unused by the uniform variant.
  BitWord tau;
  /// V_n = [v].
  BitWord v;
  /// Uniform variant: σ_τ for τ ∈ 2^n, and the pre-shrink σ'_τ.
  std::map<BitWord, BitWord> sigma;
  std::map<BitWord, BitWord> sigma_pre;
  /// Uniform variant: W_k^i words in the order they were produced.
  std::vector<BitWord> chain;
  std::vector<OracleQuery> queries;
};

struct SliceMeasure {
  unsigned j = 0;
  BitWord tau;
  Dyadic measure;
};

struct MeasureStageRecord {
  unsigned k = 0;
  unsigned N = 0;
  Rational eps;
  /// σ_τ ∈ 2^{N_k} for τ ∈ 2^k.
  std::map<BitWord, BitWord> sigma;
  /// H_{j,k} for j = 0..k, dim 1.
  std::vector<ClopenSet> H;
  /// n_k.
  unsigned n_index = 0;
  /// Stage k >= 1: the pick x, or (x0, x1) for the uniform variant, length N_k.
  std::vector<BitWord> picks;
  /// Stage k >= 1: λ(X_{j,τ}) for j < k and τ at level k-1.
  std::vector<SliceMeasure> slices;
  /// Stage k >= 1: λ of the translate intersection the pick came from.
  std::optional<Dyadic> pick_set_measure;
  /// Uniform stage k >= 1: λ(R_k).
  std::optional<Dyadic> pair_set_measure;
};

struct Certificate {
  Variant variant = Variant::SilverCat;
  std::string input_digest;
  unsigned stages = 0;
  /// Measure variants: depth of the filtration.
  unsigned filtration_depth = 0;
  std::vector<CategoryStageRecord> category;
  std::vector<MeasureStageRecord> measure;
  TreeSkeleton skeleton;

  // Summary.
  unsigned final_depth = 0;
  Dyadic body_measure;
  std::string tree_class;
  /// Measure variants: λ(H_{j,K}) for j <= K.
  std::vector<Dyadic> final_h_measures;
  /// The finite facts this certificate establishes.
  std::vector<std::string> facts;
  std::string closed_form;
};

/// Fills final_depth, body_measure, tree_class, final_h_measures, facts and
/// closed_form from the stage records and skeleton.
void fill_summary(Certificate& cert);

Json to_json(const Certificate& cert);
/// Strict schema: unknown or missing keys, wrong types and malformed values
/// throw MalformedCertificate.
Certificate certificate_from_json(const Json& j);
/// Pretty-printed JSON with a trailing newline; byte-stable.
std::string serialize(const Certificate& cert);
Certificate parse_certificate(const std::string& text);

Json clopen_to_json(const ClopenSet& set);
ClopenSet clopen_from_json(const Json& j);

}  // namespace cantor
