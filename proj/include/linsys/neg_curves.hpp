#pragma once

// (-1)-curves that can split off a quasi-homogeneous system L(d, m0, 6^n),
// their placement on base points, and the (-1)-speciality test.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linsys/linear_system.hpp"
#include "linsys/verdict.hpp"

namespace linsys {

enum class CurveFamily {
  LineThroughP0,   ///< L(1,1,1)
  LineThroughTwo,  ///< L(1,0,1^2)
  ConicFive,       ///< L(2,0,1^5)
  ChainCurve,      ///< L(e,e-1,1^{2e}), e >= 2 (e = 1 is LineThroughTwo)
  SexticSeven,     ///< L(6,3,2^7)
  DodecicNine,     ///< L(12,8,3^9)
  LinePencil,      ///< compound L(k,k,1^k), k >= 2
  Triangle,        ///< compound L(3,0,2^3)
};

enum class CurveKind { Simple, Compound };

std::string_view to_string(CurveFamily family);
CurveFamily parse_family(std::string_view name);

struct CurveCatalogEntry {
  CurveFamily family = CurveFamily::LineThroughP0;
  /// e for ChainCurve, k for LinePencil, unused otherwise.
  Int param = 0;

  CurveKind kind() const noexcept;
  /// Number of tail points the entry passes through.
  std::size_t required_points() const noexcept;
  Int degree() const noexcept;
  Int mult_at_p0() const noexcept;
  /// Common tail multiplicity of the (total) class.
  Int tail_multiplicity() const noexcept;

  /// The class on `n` tail slots, occupying the first required_points().
  DivisorClass instantiate(std::size_t n) const;
  /// The class with its tail points on the given slots (1-based, into a
  /// class with `slot_count` slots including p0).
  DivisorClass place(std::span<const std::size_t> slots, std::size_t slot_count) const;
  /// Simple constituents of a compound placed on `slots`; a simple entry
  /// yields itself.
  std::vector<DivisorClass> constituents(std::span<const std::size_t> slots,
                                         std::size_t slot_count) const;

  std::string name() const;

  friend bool operator==(const CurveCatalogEntry&, const CurveCatalogEntry&) = default;
};

/// A catalog entry at a concrete position.
struct Placement {
  CurveCatalogEntry entry;
  std::vector<std::size_t> slots;
  DivisorClass cls;
  Int intersection = 0;  ///< with the system it was found on
};

/// D.D = -1 and arithmetic genus 0.
bool is_minus_one_class(const DivisorClass& cls);

/// Every entry instantiable on n tail points whose tail multiplicity is
/// at most `mult_cap`.
std::vector<CurveCatalogEntry> catalog(std::size_t n, Int mult_cap);

/// Sum of the distinct permutations of a class whose tail has one slot
/// differing by one from the n-1 others. Throws std::invalid_argument on
/// any other shape.
DivisorClass configuration_total(const DivisorClass& base, std::size_t n);

struct SplittingScan {
  std::vector<Placement> placements;
  bool truncated = false;
};

/// All catalog placements (simple and compound) meeting `system`
/// negatively, ordered by degree then slots then name.
SplittingScan find_splittings(const LinearSystem& system, std::size_t limit = 100000);

struct WitnessEntry {
  Placement curve;
  Int multiplicity = 0;
};

struct SplittingWitness {
  std::vector<WitnessEntry> entries;
  LinearSystem residual;
};

struct SpecialityResult {
  bool special = false;
  std::optional<SplittingWitness> witness;
  /// Set when two negative curves meet positively, which forces the
  /// system to be empty.
  bool empty_by_overlap = false;
};

SpecialityResult is_minus_one_special(const LinearSystem& system);

enum class HhMode { Proven, Conjecture };

struct HhOptions {
  HhMode mode = HhMode::Proven;
  bool reverse_order = false;
};

struct HhStep {
  Placement curve;
  Int multiplicity = 0;
  LinearSystem before;
  LinearSystem after;
};

struct HhResult {
  Int ell = -1;
  LinearSystem residual;
  std::vector<HhStep> steps;
  std::vector<Placement> rejected;
  bool empty_by_overlap = false;
  std::optional<std::pair<Placement, Placement>> overlap;
};

/// Removes fixed (-1)-curves until none meets the residual negatively;
/// the dimension is max(-1, v(residual)). In Proven mode the input must
/// be quasi-homogeneous with tail multiplicity at most 6.
HhResult hh_split(const LinearSystem& system, const HhOptions& options = {});
DimVerdict hh_dimension(const LinearSystem& system, const HhOptions& options = {});

/// Quasi-homogeneous with tail multiplicity <= 6.
bool in_proven_regime(const LinearSystem& system);

nlohmann::json to_json(const Placement& placement);
/// Rebuilds a placement on a class with `slot_count` slots; throws if the
/// recorded class does not match the family and slots.
Placement placement_from_json(const nlohmann::json& j, std::size_t slot_count);
nlohmann::json to_json(const SplittingWitness& witness);
nlohmann::json to_json(const HhResult& result);

}  // namespace linsys
