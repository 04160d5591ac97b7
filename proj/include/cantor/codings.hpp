#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cantor/bitword.hpp"
#include "cantor/dyadic.hpp"

namespace cantor {

enum class Ideal { M, N, E, MPlus, NPlus, EPlus };
std::string ideal_name(Ideal ideal);
/// Accepts M, N, E, M+, N+, E+.
Ideal parse_ideal(const std::string& text);

/// indexed: ω×2^{<ω}→2; flat: 2^{<ω}→2; pair: (flat, indexed), used only for E+.
enum class CodeShape { Indexed, Flat, Pair };
std::string shape_name(CodeShape shape);
CodeShape parse_shape(const std::string& text);
CodeShape shape_for(Ideal ideal);

/// Finite sparse table; every entry not listed is 0.
struct Code {
  Ideal ideal = Ideal::N;
  CodeShape shape = CodeShape::Indexed;
  /// x(n, σ) = 1, or x_1(n, σ) = 1 for the pair shape.
  std::set<std::pair<unsigned, BitWord>> indexed;
  /// x(σ) = 1, or x_0(σ) = 1 for the pair shape.
  std::set<BitWord> flat;

  bool at(unsigned n, const BitWord& w) const { return indexed.count({n, w}) != 0; }
  bool at(const BitWord& w) const { return flat.count(w) != 0; }
  std::size_t max_length() const;
  friend bool operator==(const Code&, const Code&) = default;
};

/// Concrete presentation of a set from one of the six families. Indexed
/// ideals use `levels`; N+ uses `words`; E+ uses `words` for its x_0 part and
/// `levels` for its x_1 part. All words have length <= resolution.
struct Presentation {
  Ideal ideal = Ideal::N;
  unsigned resolution = 0;
  std::vector<std::vector<BitWord>> levels;
  std::vector<BitWord> words;
  /// M+ only.
  BitWord root;
  /// N+ and E+: the declared k in Σ < 1 - 1/k.
  unsigned k = 0;
};

/// A point of 2^ω given as a prefix followed by an optional constant tail.
/// Text form "0101(0)" for the eventually constant point, "0101" for a bare prefix.
struct Point {
  BitWord prefix;
  std::optional<bool> tail;

  static Point parse(const std::string& text);
  std::string str() const;
  bool infinite() const { return tail.has_value(); }
  /// y↾m; throws InsufficientResolution past the end of a bare prefix.
  BitWord restrict(std::size_t m) const;
  /// Length available for restriction, or SIZE_MAX for infinite points.
  std::size_t available() const;
};

enum class VerdictStatus { Refuted, UnrefutedAtBound, MemberVerifiedAtBound, NonmemberWitness };
std::string status_name(VerdictStatus status);

/// The finite data that makes a verdict re-checkable. `clause` names the
/// formula part the witness speaks about; the other fields are set as the
/// clause needs them.
struct Witness {
  std::string clause{};
  std::optional<unsigned> n{};
  std::optional<unsigned> m{};
  std::optional<unsigned> k{};
  std::optional<BitWord> sigma{};
  std::optional<BitWord> tau{};
  std::optional<BitWord> rho{};
  std::optional<Rational> value{};
};

struct Verdict {
  VerdictStatus status = VerdictStatus::UnrefutedAtBound;
  /// True when the verdict does not depend on the bounds (a genuine
  /// counterexample or an exhaustive search).
  bool conclusive = false;
  Witness witness;
  unsigned bound = 0;
  unsigned search = 0;
};
std::string describe(const Verdict& v);

/// Builds the code of a presentation. Throws MalformedPresentation when the
/// presentation breaks its family's requirements, naming the offending entries.
Code encode(const Presentation& p);

/// Bounded evaluation of φ: n, m, k <= b; universally quantified density words
/// have length < b; existential word searches have length <= s. The default s
/// is max(b, longest marked word), which makes every search exhaustive.
Verdict phi_check(const Code& code, unsigned bound, std::optional<unsigned> search = std::nullopt);

/// Bounded evaluation of ψ(x, y) over levels n <= b.
Verdict psi_member(const Code& code, const Point& point, unsigned bound);

/// Re-checks a refuted or nonmember verdict by direct table lookups. Other
/// statuses return true when their witness (if any) is consistent.
bool witness_revalidates(const Code& code, const Verdict& v, const Point* point = nullptr);

/// Membership in the presented set over the presented levels.
bool direct_member(const Presentation& p, const Point& point);

struct PresentationParams {
  unsigned resolution = 8;
  unsigned levels = 9;
};
/// Seeded well-formed presentation of the given family.
Presentation random_presentation(Ideal ideal, std::uint64_t seed, const PresentationParams& params = {});

Presentation read_presentation(std::istream& in);
void write_presentation(std::ostream& out, const Presentation& p);
Code read_code(std::istream& in);
void write_code(std::ostream& out, const Code& code);

}  // namespace cantor
