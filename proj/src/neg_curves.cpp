#include "linsys/neg_curves.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace linsys {

// --- catalog entries ----------------------------------------------------------

CurveKind CurveCatalogEntry::kind() const noexcept {
  return family == CurveFamily::LinePencil || family == CurveFamily::Triangle ? CurveKind::Compound
                                                                              : CurveKind::Simple;
}

std::size_t CurveCatalogEntry::required_points() const noexcept {
  switch (family) {
    case CurveFamily::LineThroughP0: return 1;
    case CurveFamily::LineThroughTwo: return 2;
    case CurveFamily::ConicFive: return 5;
    case CurveFamily::ChainCurve: return static_cast<std::size_t>(2 * param);
    case CurveFamily::SexticSeven: return 7;
    case CurveFamily::DodecicNine: return 9;
    case CurveFamily::LinePencil: return static_cast<std::size_t>(param);
    case CurveFamily::Triangle: return 3;
  }
  return 0;
}

Int CurveCatalogEntry::degree() const noexcept {
  switch (family) {
    case CurveFamily::LineThroughP0:
    case CurveFamily::LineThroughTwo: return 1;
    case CurveFamily::ConicFive: return 2;
    case CurveFamily::ChainCurve: return param;
    case CurveFamily::SexticSeven: return 6;
    case CurveFamily::DodecicNine: return 12;
    case CurveFamily::LinePencil: return param;
    case CurveFamily::Triangle: return 3;
  }
  return 0;
}

Int CurveCatalogEntry::mult_at_p0() const noexcept {
  switch (family) {
    case CurveFamily::LineThroughP0: return 1;
    case CurveFamily::LineThroughTwo:
    case CurveFamily::ConicFive:
    case CurveFamily::Triangle: return 0;
    case CurveFamily::ChainCurve: return param - 1;
    case CurveFamily::SexticSeven: return 3;
    case CurveFamily::DodecicNine: return 8;
    case CurveFamily::LinePencil: return param;
  }
  return 0;
}

Int CurveCatalogEntry::tail_multiplicity() const noexcept {
  switch (family) {
    case CurveFamily::SexticSeven:
    case CurveFamily::Triangle: return 2;
    case CurveFamily::DodecicNine: return 3;
    default: return 1;
  }
}

DivisorClass CurveCatalogEntry::place(std::span<const std::size_t> slots,
                                      std::size_t slot_count) const {
  if (slots.size() != required_points()) {
    throw std::invalid_argument("placement of " + name() + " needs " +
                                std::to_string(required_points()) + " slots");
  }
  std::vector<Int> mults(slot_count, 0);
  if (slot_count == 0) throw std::invalid_argument("placement needs the p0 slot");
  mults[0] = mult_at_p0();
  for (std::size_t s : slots) {
    if (s == 0 || s >= slot_count) throw std::out_of_range("placement slot out of range");
    mults[s] = tail_multiplicity();
  }
  return DivisorClass(degree(), std::move(mults));
}

DivisorClass CurveCatalogEntry::instantiate(std::size_t n) const {
  std::size_t r = required_points();
  if (r > n) throw std::invalid_argument(name() + " needs " + std::to_string(r) + " tail points");
  std::vector<std::size_t> slots(r);
  std::iota(slots.begin(), slots.end(), std::size_t{1});
  return place(slots, n + 1);
}

std::vector<DivisorClass> CurveCatalogEntry::constituents(std::span<const std::size_t> slots,
                                                          std::size_t slot_count) const {
  std::vector<DivisorClass> out;
  if (family == CurveFamily::LinePencil) {
    CurveCatalogEntry line{CurveFamily::LineThroughP0, 0};
    for (std::size_t s : slots) out.push_back(line.place(std::span(&s, 1), slot_count));
  } else if (family == CurveFamily::Triangle) {
    CurveCatalogEntry line{CurveFamily::LineThroughTwo, 0};
    for (std::size_t i = 0; i < slots.size(); ++i) {
      for (std::size_t j = i + 1; j < slots.size(); ++j) {
        std::size_t pair[2] = {slots[i], slots[j]};
        out.push_back(line.place(pair, slot_count));
      }
    }
  } else {
    out.push_back(place(slots, slot_count));
  }
  return out;
}

std::string CurveCatalogEntry::name() const {
  std::size_t r = required_points();
  std::vector<Int> mults(r + 1, tail_multiplicity());
  mults[0] = mult_at_p0();
  return DivisorClass(degree(), std::move(mults)).to_string();
}

bool is_minus_one_class(const DivisorClass& cls) {
  return intersect(cls, cls) == -1 && arithmetic_genus(cls) == 0;
}

std::vector<CurveCatalogEntry> catalog(std::size_t n, Int mult_cap) {
  std::vector<CurveCatalogEntry> all;
  all.push_back({CurveFamily::LineThroughP0, 0});
  all.push_back({CurveFamily::LineThroughTwo, 0});
  all.push_back({CurveFamily::ConicFive, 0});
  for (Int e = 2; static_cast<std::size_t>(2 * e) <= n; ++e) all.push_back({CurveFamily::ChainCurve, e});
  all.push_back({CurveFamily::SexticSeven, 0});
  all.push_back({CurveFamily::DodecicNine, 0});
  for (Int k = 2; static_cast<std::size_t>(k) <= n; ++k) all.push_back({CurveFamily::LinePencil, k});
  all.push_back({CurveFamily::Triangle, 0});

  std::vector<CurveCatalogEntry> out;
  for (const auto& entry : all) {
    if (entry.required_points() <= n && entry.tail_multiplicity() <= mult_cap) out.push_back(entry);
  }
  return out;
}

DivisorClass configuration_total(const DivisorClass& base, std::size_t n) {
  DivisorClass b = base.padded(n + 1);
  if (b.slot_count() != n + 1 || n < 2) {
    throw std::invalid_argument("configuration needs a base on exactly n >= 2 tail slots");
  }
  std::vector<Int> tail(b.mults().begin() + 1, b.mults().end());
  std::vector<Int> distinct = tail;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() != 2 || distinct[1] - distinct[0] != 1) {
    throw std::invalid_argument("base " + base.to_string() +
                                " must have two tail multiplicities differing by one");
  }
  auto low = std::count(tail.begin(), tail.end(), distinct[0]);
  auto high = static_cast<std::ptrdiff_t>(n) - low;
  if (low != 1 && high != 1) {
    throw std::invalid_argument("base " + base.to_string() +
                                " must single out exactly one tail point");
  }
  // n distinct placements of the odd point; each slot sees it once.
  Int sum = std::accumulate(tail.begin(), tail.end(), Int{0});
  auto count = static_cast<Int>(n);
  std::vector<Int> mults(n + 1, sum);
  mults[0] = checked::mul(count, b.mult(0));
  return DivisorClass(checked::mul(count, b.degree()), std::move(mults));
}

bool in_proven_regime(const LinearSystem& system) {
  return system.is_quasi_homogeneous() && system.max_tail_multiplicity() <= 6;
}

// --- placement search ------------------------------------------------------------

namespace {

/// Visits the r-subsets of `values` (in lexicographic order of positions)
/// with weight * sum > threshold. Returns false if `visit` stopped early.
class HeavySubsets {
 public:
  HeavySubsets(std::span<const Int> values, std::size_t r, Int weight, Int threshold)
      : values_(values), r_(r), weight_(weight), threshold_(threshold), suffix_max_(values.size() + 1, 0) {
    for (std::size_t i = values.size(); i-- > 0;) suffix_max_[i] = std::max(values[i], suffix_max_[i + 1]);
  }

  bool run(const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    chosen_.clear();
    return step(0, 0, visit);
  }

 private:
  bool step(std::size_t next, Int sum, const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    std::size_t need = r_ - chosen_.size();
    if (need == 0) return weight_ * sum > threshold_ ? visit(chosen_) : true;
    if (values_.size() - next < need) return true;
    if (weight_ * (sum + static_cast<Int>(need) * suffix_max_[next]) <= threshold_) return true;
    for (std::size_t i = next; i + need <= values_.size(); ++i) {
      if (weight_ * (sum + static_cast<Int>(need) * suffix_max_[i]) <= threshold_) break;
      chosen_.push_back(i);
      bool go_on = step(i + 1, sum + values_[i], visit);
      chosen_.pop_back();
      if (!go_on) return false;
    }
    return true;
  }

  std::span<const Int> values_;
  std::size_t r_;
  Int weight_;
  Int threshold_;
  std::vector<Int> suffix_max_;
  std::vector<std::size_t> chosen_;
};

std::vector<CurveCatalogEntry> simple_families(std::size_t points) {
  std::vector<CurveCatalogEntry> out;
  for (const auto& entry : catalog(points, 3)) {
    if (entry.kind() == CurveKind::Simple) out.push_back(entry);
  }
  return out;
}

struct PointIndex {
  std::vector<std::size_t> slots;  // tail slots with positive multiplicity
  std::vector<Int> values;
};

PointIndex point_index(const DivisorClass& cls) {
  PointIndex idx;
  for (std::size_t s = 1; s < cls.slot_count(); ++s) {
    if (cls.mult(s) > 0) {
      idx.slots.push_back(s);
      idx.values.push_back(cls.mult(s));
    }
  }
  return idx;
}

/// Placements of `entry` on `cls` with negative intersection, in
/// lexicographic slot order; stops after `limit` in total.
bool negative_placements(const DivisorClass& cls, const PointIndex& idx, const CurveCatalogEntry& entry,
                         std::size_t limit, std::vector<Placement>& out) {
  std::size_t r = entry.required_points();
  if (r > idx.slots.size()) return true;
  Int weight = entry.tail_multiplicity();
  if (entry.family == CurveFamily::Triangle) weight = 2;
  Int threshold = checked::sub(checked::mul(entry.degree(), cls.degree()),
                               checked::mul(entry.mult_at_p0(), cls.mult(0)));
  HeavySubsets subsets(idx.values, r, weight, threshold);
  return subsets.run([&](const std::vector<std::size_t>& pos) {
    std::vector<std::size_t> slots;
    slots.reserve(pos.size());
    for (std::size_t p : pos) slots.push_back(idx.slots[p]);
    DivisorClass placed = entry.place(slots, cls.slot_count());
    Int x = intersect(cls, placed);
    if (x < 0) {
      out.push_back(Placement{entry, std::move(slots), std::move(placed), x});
      if (out.size() >= limit) return false;
    }
    return true;
  });
}

struct SimpleScan {
  std::vector<Placement> curves;
  std::optional<std::pair<std::size_t, std::size_t>> overlap;
};

/// Simple catalog curves meeting `cls` negatively. Pairwise disjoint
/// (-1)-curves are independent in the Picard group, so collecting more
/// than its rank guarantees a positively meeting pair.
SimpleScan scan_simple(const DivisorClass& cls) {
  SimpleScan scan;
  PointIndex idx = point_index(cls);
  std::size_t cap = cls.slot_count() + 2;
  for (const auto& entry : simple_families(idx.slots.size())) {
    if (!negative_placements(cls, idx, entry, cap - scan.curves.size(), scan.curves)) break;
  }
  for (std::size_t i = 0; i < scan.curves.size() && !scan.overlap; ++i) {
    for (std::size_t j = i + 1; j < scan.curves.size(); ++j) {
      if (intersect(scan.curves[i].cls, scan.curves[j].cls) > 0) {
        scan.overlap = std::make_pair(i, j);
        break;
      }
    }
  }
  if (!scan.overlap && scan.curves.size() >= cap) {
    throw std::logic_error("more disjoint (-1)-curves than the Picard rank allows");
  }
  return scan;
}

/// Groups disjoint simple curves into compound configurations where the
/// whole orbit is present with one multiplicity: lines through p0 form a
/// pencil, three lines on a triple of tail points form a triangle.
std::vector<Placement> group_compounds(const DivisorClass& cls, std::vector<Placement> simple) {
  std::vector<Placement> out;
  std::vector<bool> used(simple.size(), false);

  std::vector<std::size_t> lines0;
  for (std::size_t i = 0; i < simple.size(); ++i) {
    if (simple[i].entry.family == CurveFamily::LineThroughP0) lines0.push_back(i);
  }
  // Pencils: lines through p0 sharing an intersection number.
  std::vector<bool> taken(lines0.size(), false);
  for (std::size_t a = 0; a < lines0.size(); ++a) {
    if (taken[a]) continue;
    std::vector<std::size_t> group{lines0[a]};
    for (std::size_t b = a + 1; b < lines0.size(); ++b) {
      if (!taken[b] && simple[lines0[b]].intersection == simple[lines0[a]].intersection) {
        group.push_back(lines0[b]);
        taken[b] = true;
      }
    }
    if (group.size() < 2) continue;
    CurveCatalogEntry pencil{CurveFamily::LinePencil, static_cast<Int>(group.size())};
    std::vector<std::size_t> slots;
    for (std::size_t i : group) {
      slots.push_back(simple[i].slots[0]);
      used[i] = true;
    }
    std::sort(slots.begin(), slots.end());
    DivisorClass total = pencil.place(slots, cls.slot_count());
    out.push_back(Placement{pencil, slots, total, intersect(cls, total)});
  }

  std::vector<std::size_t> lines2;
  for (std::size_t i = 0; i < simple.size(); ++i) {
    if (simple[i].entry.family == CurveFamily::LineThroughTwo) lines2.push_back(i);
  }
  if (lines2.size() == 3) {
    std::vector<std::size_t> pts;
    for (std::size_t i : lines2) pts.insert(pts.end(), simple[i].slots.begin(), simple[i].slots.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Int x = simple[lines2[0]].intersection;
    bool same = simple[lines2[1]].intersection == x && simple[lines2[2]].intersection == x;
    if (pts.size() == 3 && same) {
      CurveCatalogEntry tri{CurveFamily::Triangle, 0};
      DivisorClass total = tri.place(pts, cls.slot_count());
      out.push_back(Placement{tri, pts, total, intersect(cls, total)});
      for (std::size_t i : lines2) used[i] = true;
    }
  }

  for (std::size_t i = 0; i < simple.size(); ++i) {
    if (!used[i]) out.push_back(std::move(simple[i]));
  }
  return out;
}

/// Per-constituent intersection of a (possibly compound) placement.
Int constituent_intersection(const DivisorClass& cls, const Placement& p) {
  auto parts = p.entry.constituents(p.slots, cls.slot_count());
  Int x = intersect(cls, parts.front());
  for (const auto& part : parts) {
    if (intersect(cls, part) != x) return 0;
  }
  return x;
}

bool split_order(const Placement& a, const Placement& b) {
  bool ca = a.entry.kind() == CurveKind::Compound;
  bool cb = b.entry.kind() == CurveKind::Compound;
  if (ca != cb) return ca;
  if (a.entry.degree() != b.entry.degree()) return a.entry.degree() > b.entry.degree();
  if (a.slots != b.slots) return a.slots < b.slots;
  return a.entry.name() < b.entry.name();
}

}  // namespace

// --- public operations ---------------------------------------------------------

SplittingScan find_splittings(const LinearSystem& system, std::size_t limit) {
  SplittingScan scan;
  DivisorClass cls = system.as_class();
  if (cls.slot_count() == 0) cls = cls.padded(1);
  PointIndex idx = point_index(cls);
  for (const auto& entry : catalog(idx.slots.size(), 3)) {
    if (scan.placements.size() >= limit) break;
    if (!negative_placements(cls, idx, entry, limit - scan.placements.size(), scan.placements)) {
      scan.truncated = true;
      break;
    }
  }
  std::sort(scan.placements.begin(), scan.placements.end(), [](const Placement& a, const Placement& b) {
    if (a.entry.degree() != b.entry.degree()) return a.entry.degree() < b.entry.degree();
    if (a.slots != b.slots) return a.slots < b.slots;
    return a.entry.name() < b.entry.name();
  });
  return scan;
}

SpecialityResult is_minus_one_special(const LinearSystem& system) {
  SpecialityResult result;
  DivisorClass cls = system.normalized().as_class();
  SimpleScan scan = scan_simple(cls);
  if (scan.overlap) {
    result.empty_by_overlap = true;
    return result;
  }
  if (scan.curves.empty()) return result;

  SplittingWitness witness;
  DivisorClass residual = cls;
  bool multiple = false;
  for (auto& item : group_compounds(cls, std::move(scan.curves))) {
    Int n = -constituent_intersection(cls, item);
    if (n <= 0) continue;
    DivisorClass next = residual - n * item.cls;
    if (!next.is_effective_shape()) continue;
    residual = std::move(next);
    multiple = multiple || n >= 2;
    witness.entries.push_back(WitnessEntry{std::move(item), n});
  }
  if (witness.entries.empty()) return result;
  witness.residual = residual.as_system();
  if (multiple && virtual_dim(witness.residual) >= 0) {
    result.special = true;
    result.witness = std::move(witness);
  }
  return result;
}

HhResult hh_split(const LinearSystem& system, const HhOptions& options) {
  LinearSystem start = system.normalized();
  if (options.mode == HhMode::Proven && !in_proven_regime(start)) {
    throw std::domain_error(start.to_string() +
                            " is outside the proven regime (quasi-homogeneous, tail multiplicity <= 6)");
  }
  HhResult result;
  DivisorClass current = start.as_class();
  const Int guard = start.degree() + 2;
  for (Int pass = 0;; ++pass) {
    if (pass > guard) throw std::logic_error("curve removal did not terminate on " + start.to_string());
    SimpleScan scan = scan_simple(current);
    if (scan.overlap) {
      result.empty_by_overlap = true;
      result.overlap = std::make_pair(scan.curves[scan.overlap->first], scan.curves[scan.overlap->second]);
      break;
    }
    if (scan.curves.empty()) break;
    auto items = group_compounds(current, std::move(scan.curves));
    std::sort(items.begin(), items.end(), split_order);
    if (options.reverse_order) std::reverse(items.begin(), items.end());

    bool progressed = false;
    for (auto& item : items) {
      Int n = -constituent_intersection(current, item);
      if (n <= 0) continue;
      DivisorClass next = current - n * item.cls;
      if (!next.is_effective_shape()) {
        result.rejected.push_back(item);
        continue;
      }
      if (next.degree() >= current.degree()) throw std::logic_error("split did not lower the degree");
      item.intersection = intersect(current, item.cls);
      result.steps.push_back(HhStep{item, n, current.as_system(), next.as_system()});
      current = std::move(next);
      progressed = true;
    }
    if (!progressed) break;
  }
  result.residual = current.as_system();
  result.ell = result.empty_by_overlap ? -1 : std::max<Int>(-1, virtual_dim(result.residual));
  return result;
}

DimVerdict hh_dimension(const LinearSystem& system, const HhOptions& options) {
  HhResult r = hh_split(system, options);
  LinearSystem start = system.normalized();
  return make_verdict("minus_one_curves", start, status_for(start, r.ell), r.ell, to_json(r));
}

// --- serialization ---------------------------------------------------------------

namespace {

constexpr std::pair<CurveFamily, std::string_view> kFamilyNames[] = {
    {CurveFamily::LineThroughP0, "line_p0"},   {CurveFamily::LineThroughTwo, "line_two"},
    {CurveFamily::ConicFive, "conic_five"},    {CurveFamily::ChainCurve, "chain"},
    {CurveFamily::SexticSeven, "sextic_seven"}, {CurveFamily::DodecicNine, "dodecic_nine"},
    {CurveFamily::LinePencil, "line_pencil"},   {CurveFamily::Triangle, "triangle"},
};

}  // namespace

std::string_view to_string(CurveFamily family) {
  for (auto [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "unknown";
}

CurveFamily parse_family(std::string_view name) {
  for (auto [f, n] : kFamilyNames) {
    if (n == name) return f;
  }
  throw std::invalid_argument("unknown curve family '" + std::string(name) + "'");
}

Placement placement_from_json(const nlohmann::json& j, std::size_t slot_count) {
  Placement p;
  p.entry.family = parse_family(j.at("family").get<std::string>());
  p.entry.param = j.at("param").get<Int>();
  if (p.entry.family == CurveFamily::ChainCurve && p.entry.param < 2) {
    throw std::invalid_argument("chain curves need e >= 2");
  }
  if (p.entry.family == CurveFamily::LinePencil && p.entry.param < 2) {
    throw std::invalid_argument("line pencils need k >= 2");
  }
  p.slots = j.at("slots").get<std::vector<std::size_t>>();
  if (!std::is_sorted(p.slots.begin(), p.slots.end()) ||
      std::adjacent_find(p.slots.begin(), p.slots.end()) != p.slots.end()) {
    throw std::invalid_argument("placement slots must be strictly increasing");
  }
  p.cls = p.entry.place(p.slots, slot_count);
  if (j.contains("class") && !(DivisorClass::parse(j.at("class").get<std::string>()) == p.cls)) {
    throw std::invalid_argument("recorded class does not match " + p.entry.name());
  }
  p.intersection = j.value("intersection", Int{0});
  return p;
}

nlohmann::json to_json(const Placement& placement) {
  return {{"curve", placement.entry.name()},
          {"family", to_string(placement.entry.family)},
          {"param", placement.entry.param},
          {"slots", placement.slots},
          {"class", placement.cls.to_string()},
          {"intersection", placement.intersection}};
}

nlohmann::json to_json(const SplittingWitness& witness) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : witness.entries) {
    auto j = to_json(e.curve);
    j["multiplicity"] = e.multiplicity;
    entries.push_back(std::move(j));
  }
  return {{"entries", entries}, {"residual", witness.residual.to_string()}};
}

nlohmann::json to_json(const HhResult& result) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : result.steps) {
    auto j = to_json(s.curve);
    j["multiplicity"] = s.multiplicity;
    j["before"] = s.before.to_string();
    j["after"] = s.after.to_string();
    steps.push_back(std::move(j));
  }
  nlohmann::json out = {{"steps", steps},
                        {"residual", result.residual.to_string()},
                        {"empty_by_overlap", result.empty_by_overlap}};
  if (result.overlap) {
    out["overlap"] = {to_json(result.overlap->first), to_json(result.overlap->second)};
  }
  return out;
}

}  // namespace linsys
