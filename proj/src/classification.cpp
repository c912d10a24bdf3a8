#include "linsys/classification.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "linsys/neg_curves.hpp"

namespace linsys {

namespace {

constexpr Int kTailMult = 6;

void append_term(std::string& out, Int coef, const char* var) {
  if (coef == 0) return;
  if (coef < 0) out += '-';
  else if (!out.empty()) out += '+';
  Int mag = coef < 0 ? -coef : coef;
  if (mag != 1 || *var == '\0') out += std::to_string(mag);
  out += var;
}

/// "10e", "7e+1", "2e-2", "e".
std::string linear_in_e(Int alpha, Int beta) {
  std::string out;
  append_term(out, alpha, "e");
  append_term(out, beta, "");
  return out.empty() ? "0" : out;
}

}  // namespace

// --- Affine and BoundaryLine -----------------------------------------------------

Int Affine::eval(Int n_val, Int d_val, Int e_val) const {
  return n * n_val + d * d_val + e * e_val + constant;
}

std::string Affine::to_string() const {
  std::string out;
  append_term(out, n, "n");
  append_term(out, d, "d");
  append_term(out, e, "e");
  append_term(out, constant, "");
  return out.empty() ? "0" : out;
}

bool BoundaryLine::contains(Int n_val, Int d_val) const {
  if (n_even && n_val % 2 != 0) return false;
  return coef_d * d_val == coef_n * n_val + constant;
}

std::string BoundaryLine::to_string() const {
  std::string lhs;
  append_term(lhs, coef_d, "d");
  std::string rhs;
  append_term(rhs, coef_n, "n");
  append_term(rhs, constant, "");
  std::string out = lhs + "=" + (rhs.empty() ? "0" : rhs);
  if (n_even) out += ", n even";
  return out;
}

// --- rows ------------------------------------------------------------------------

std::string ClassificationRow::system_text() const {
  switch (kind) {
    case RowKind::Family:
      return "L(" + linear_in_e(alpha, beta) + "," + linear_in_e(alpha, beta - d_minus_m0) + ",6^{2e})";
    case RowKind::General: {
      std::string m0 = "d";
      append_term(m0, -d_minus_m0, "");
      return "L(d," + m0 + ",6^{n})";
    }
    case RowKind::Sporadic:
      return "L(" + std::to_string(system.degree()) + "," + std::to_string(system.m0()) + ",6^{" +
             std::to_string(system.tail_points()) + "})";
  }
  return {};
}

std::string ClassificationRow::range_text() const {
  switch (kind) {
    case RowKind::Family:
      return e_upper ? std::to_string(*e_upper) + ">=e>=1" : "e>=1";
    case RowKind::General: {
      // ell >= 0 rearranged as (coef d) d >= -(coef n) n - constant.
      std::string lhs;
      append_term(lhs, ell.d, "d");
      std::string rhs;
      append_term(rhs, -ell.n, "n");
      append_term(rhs, -ell.constant, "");
      return lhs + ">=" + (rhs.empty() ? "0" : rhs) + ", n>=1";
    }
    case RowKind::Sporadic:
      return "";
  }
  return {};
}

std::string ClassificationRow::boundary_text() const { return boundary ? boundary->to_string() : ""; }

bool ClassificationRow::covers(Int n, Int d) const {
  if (n < 1 || d - d_minus_m0 < 0) return false;
  switch (kind) {
    case RowKind::Family: {
      if (n % 2 != 0) return false;
      Int e = n / 2;
      if (e < 1 || (e_upper && e > *e_upper)) return false;
      return d == alpha * e + beta;
    }
    case RowKind::General:
      return ell.eval(n, d, 0) >= 0;
    case RowKind::Sporadic:
      return system.degree() == d && static_cast<Int>(system.tail_points()) == n;
  }
  return false;
}

LinearSystem ClassificationRow::instantiate_e(Int e) const {
  if (kind != RowKind::Family) throw std::logic_error("only family rows take e");
  Int d = alpha * e + beta;
  return LinearSystem::quasi_homogeneous(d, d - d_minus_m0, kTailMult, static_cast<std::size_t>(2 * e));
}

LinearSystem ClassificationRow::instantiate_nd(Int n, Int d) const {
  return LinearSystem::quasi_homogeneous(d, d - d_minus_m0, kTailMult, static_cast<std::size_t>(n));
}

// --- sweep -----------------------------------------------------------------------

ClassificationBounds default_bounds(Int e_max) {
  ClassificationBounds b;
  b.max_n = std::max<Int>(22, 2 * (e_max + 1));
  b.max_degree = std::max<Int>(60, 10 * (e_max + 1));
  return b;
}

namespace {

struct Signature {
  /// Multiplicity of the chain curve through all 2e tail points, or 0.
  Int chain = 0;
  /// Multiplicity of the lines through p0, or 0.
  Int lines = 0;
  /// Entries with multiplicity >= 2 other than the two above.
  bool other = false;
};

struct Found {
  SpecialInstance inst;
  Signature sig;
};

Signature signature_of(const SplittingWitness& w, Int n) {
  Signature sig;
  for (const auto& entry : w.entries) {
    const auto& fam = entry.curve.entry.family;
    bool chain = (fam == CurveFamily::ChainCurve && 2 * entry.curve.entry.param == n) ||
                 (fam == CurveFamily::LineThroughTwo && n == 2);
    bool lines = fam == CurveFamily::LinePencil || (fam == CurveFamily::LineThroughP0 && n == 1);
    if (chain) sig.chain = entry.multiplicity;
    else if (lines) sig.lines = entry.multiplicity;
    else if (entry.multiplicity >= 2) sig.other = true;
  }
  return sig;
}

std::vector<Found> sweep(const ClassificationBounds& bounds) {
  std::vector<Found> found;
  std::mutex mu;
  std::atomic<Int> next{1};
  unsigned jobs = bounds.jobs ? bounds.jobs : std::max(1u, std::thread::hardware_concurrency());
  auto worker = [&] {
    for (Int d = next++; d <= bounds.max_degree; d = next++) {
      std::vector<Found> local;
      for (Int n = 1; n <= bounds.max_n; ++n) {
        for (Int m0 = 0; m0 <= d; ++m0) {
          auto L = LinearSystem::quasi_homogeneous(d, m0, kTailMult, static_cast<std::size_t>(n));
          SpecialityResult r = is_minus_one_special(L);
          if (!r.special) continue;
          Found f;
          f.inst.system = L;
          f.inst.v = virtual_dim(L);
          f.inst.ell = hh_split(L).ell;
          f.sig = signature_of(*r.witness, n);
          local.push_back(std::move(f));
        }
      }
      std::lock_guard lock(mu);
      for (auto& f : local) found.push_back(std::move(f));
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    auto key = [](const Found& f) {
      const auto& L = f.inst.system;
      return std::make_tuple(L.degree() - L.m0(), L.degree(), static_cast<Int>(L.tail_points()));
    };
    return key(a) < key(b);
  });
  return found;
}

bool is_general(const Found& f, Int c) {
  return c <= 4 && f.sig.lines == kTailMult - c && f.sig.chain < 2 && !f.sig.other;
}

bool is_family(const Found& f) { return f.sig.chain >= 2 && !f.sig.other; }

/// Solves for a*n + b*d + c matching every sample exactly.
std::optional<Affine> fit_nd(const std::vector<std::array<Int, 3>>& samples) {
  if (samples.size() < 3) return std::nullopt;
  // Pick three affinely independent samples.
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      for (std::size_t k = j + 1; k < samples.size(); ++k) {
        auto [n1, d1, y1] = samples[i];
        auto [n2, d2, y2] = samples[j];
        auto [n3, d3, y3] = samples[k];
        Int det = (n2 - n1) * (d3 - d1) - (n3 - n1) * (d2 - d1);
        if (det == 0) continue;
        Int an = (y2 - y1) * (d3 - d1) - (y3 - y1) * (d2 - d1);
        Int ad = (n2 - n1) * (y3 - y1) - (n3 - n1) * (y2 - y1);
        if (an % det != 0 || ad % det != 0) return std::nullopt;
        Affine f;
        f.n = an / det;
        f.d = ad / det;
        f.constant = y1 - f.n * n1 - f.d * d1;
        for (const auto& [n, d, y] : samples) {
          if (f.eval(n, d, 0) != y) return std::nullopt;
        }
        return f;
      }
    }
  }
  return std::nullopt;
}

/// Exact line y = a*x + b through all samples.
std::optional<std::pair<Int, Int>> fit_line(const std::vector<std::pair<Int, Int>>& samples) {
  if (samples.size() < 2) return std::nullopt;
  auto [x1, y1] = samples[0];
  auto [x2, y2] = samples[1];
  if (x2 == x1 || (y2 - y1) % (x2 - x1) != 0) return std::nullopt;
  Int a = (y2 - y1) / (x2 - x1);
  Int b = y1 - a * x1;
  for (auto [x, y] : samples) {
    if (a * x + b != y) return std::nullopt;
  }
  return std::make_pair(a, b);
}

ClassificationRow sporadic_row(const SpecialInstance& s) {
  ClassificationRow row;
  row.kind = RowKind::Sporadic;
  row.d_minus_m0 = s.system.degree() - s.system.m0();
  row.system = s.system;
  row.v.constant = s.v;
  row.ell.constant = s.ell;
  return row;
}

}  // namespace

std::vector<SpecialInstance> special_sweep(const ClassificationBounds& bounds) {
  std::vector<SpecialInstance> out;
  for (auto& f : sweep(bounds)) out.push_back(std::move(f.inst));
  return out;
}

std::vector<ClassificationRow> generate_classification(Int e_max) {
  return generate_classification(e_max, default_bounds(e_max));
}

std::vector<ClassificationRow> generate_classification(Int e_max, const ClassificationBounds& bounds) {
  if (e_max < 1) throw std::invalid_argument("e_max must be at least 1");
  std::vector<Found> found = sweep(bounds);

  std::map<Int, std::vector<const Found*>> by_block;
  for (const auto& f : found) by_block[f.inst.system.degree() - f.inst.system.m0()].push_back(&f);

  std::vector<ClassificationRow> rows;
  for (const auto& [c, members] : by_block) {
    std::vector<ClassificationRow> families, generals, sporadics;

    // Families keyed by the chain multiplicity.
    std::map<Int, std::vector<const Found*>> fam_groups;
    std::vector<const Found*> general_members, rest;
    for (const Found* f : members) {
      if (is_general(*f, c)) general_members.push_back(f);
      else if (is_family(*f)) fam_groups[f->sig.chain].push_back(f);
      else rest.push_back(f);
    }

    for (const auto& [mu, group] : fam_groups) {
      std::vector<std::pair<Int, Int>> d_of_e, v_of_e, ell_of_e;
      for (const Found* f : group) {
        Int e = static_cast<Int>(f->inst.system.tail_points()) / 2;
        d_of_e.emplace_back(e, f->inst.system.degree());
        v_of_e.emplace_back(e, f->inst.v);
        ell_of_e.emplace_back(e, f->inst.ell);
      }
      std::sort(d_of_e.begin(), d_of_e.end());
      std::sort(v_of_e.begin(), v_of_e.end());
      std::sort(ell_of_e.begin(), ell_of_e.end());
      auto dfit = fit_line(d_of_e);
      auto vfit = fit_line(v_of_e);
      auto lfit = fit_line(ell_of_e);
      bool contiguous = true;
      for (std::size_t i = 0; i < d_of_e.size(); ++i) contiguous &= d_of_e[i].first == static_cast<Int>(i) + 1;
      if (!dfit || !vfit || !lfit || !contiguous) {
        for (const Found* f : group) rest.push_back(f);
        continue;
      }
      ClassificationRow row;
      row.kind = RowKind::Family;
      row.d_minus_m0 = c;
      row.alpha = dfit->first;
      row.beta = dfit->second;
      row.v.e = vfit->first;
      row.v.constant = vfit->second;
      row.ell.e = lfit->first;
      row.ell.constant = lfit->second;
      Int last = d_of_e.back().first;
      Int next_d = row.alpha * (last + 1) + row.beta;
      bool next_in_box = 2 * (last + 1) <= bounds.max_n && next_d <= bounds.max_degree;
      if (next_in_box) row.e_upper = last;
      families.push_back(std::move(row));
    }

    if (!general_members.empty()) {
      std::vector<std::array<Int, 3>> vs, ls;
      for (const Found* f : general_members) {
        Int n = static_cast<Int>(f->inst.system.tail_points());
        Int d = f->inst.system.degree();
        vs.push_back({n, d, f->inst.v});
        ls.push_back({n, d, f->inst.ell});
      }
      auto vfit = fit_nd(vs);
      auto lfit = fit_nd(ls);
      if (!vfit || !lfit || lfit->d <= 0) {
        throw std::logic_error("general block " + std::to_string(c) + " does not fit an affine formula");
      }
      ClassificationRow row;
      row.kind = RowKind::General;
      row.d_minus_m0 = c;
      row.v = *vfit;
      row.ell = *lfit;

      // In-range parameters whose witness is not the plain line pencil.
      std::set<std::pair<Int, Int>> general_pts;
      for (const Found* f : general_members) {
        general_pts.emplace(static_cast<Int>(f->inst.system.tail_points()), f->inst.system.degree());
      }
      std::vector<std::pair<Int, Int>> boundary_pts;
      for (Int n = 1; n <= bounds.max_n; ++n) {
        for (Int d = std::max<Int>(c, 1); d <= bounds.max_degree; ++d) {
          if (row.covers(n, d) && !general_pts.count({n, d})) boundary_pts.emplace_back(n, d);
        }
      }
      if (!boundary_pts.empty()) {
        BoundaryLine line;
        if (boundary_pts.size() >= 2) {
          Int dn = boundary_pts[1].first - boundary_pts[0].first;
          Int dd = boundary_pts[1].second - boundary_pts[0].second;
          Int g = std::gcd(dn, dd);
          line.coef_d = dn / g;
          line.coef_n = dd / g;
          line.constant = line.coef_d * boundary_pts[0].second - line.coef_n * boundary_pts[0].first;
        } else {
          line.coef_d = 1;
          line.coef_n = 0;
          line.constant = boundary_pts[0].second;
        }
        line.n_even = std::all_of(boundary_pts.begin(), boundary_pts.end(),
                                  [](const auto& p) { return p.first % 2 == 0; });
        // The line must describe the exceptional set exactly.
        for (Int n = 1; n <= bounds.max_n; ++n) {
          for (Int d = std::max<Int>(c, 1); d <= bounds.max_degree; ++d) {
            bool listed = std::find(boundary_pts.begin(), boundary_pts.end(), std::make_pair(n, d)) !=
                          boundary_pts.end();
            if (row.covers(n, d) && line.contains(n, d) != listed) {
              throw std::logic_error("boundary of block " + std::to_string(c) + " is not a line");
            }
          }
        }
        row.boundary = line;
      }
      generals.push_back(std::move(row));
    }

    for (const Found* f : rest) sporadics.push_back(sporadic_row(f->inst));

    std::sort(families.begin(), families.end(), [](const auto& a, const auto& b) {
      return std::tie(a.beta, a.alpha) < std::tie(b.beta, b.alpha);
    });
    std::sort(sporadics.begin(), sporadics.end(), [](const auto& a, const auto& b) {
      return std::make_pair(a.system.degree(), a.system.tail_points()) <
             std::make_pair(b.system.degree(), b.system.tail_points());
    });
    for (auto* part : {&families, &generals, &sporadics}) {
      for (auto& r : *part) rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace linsys
