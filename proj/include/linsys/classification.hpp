#pragma once

// Symbolic classification of the (-1)-special systems L(d, m0, 6^n),
// recovered by exhaustive search over a parameter box and fitting the
// observed families to affine formulas.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "linsys/linear_system.hpp"

namespace linsys {

/// a*n + b*d + c*e + constant.
struct Affine {
  Int n = 0;
  Int d = 0;
  Int e = 0;
  Int constant = 0;

  Int eval(Int n_val, Int d_val, Int e_val) const;
  /// Terms in the order n, d, e, constant, e.g. "-21n+3d-1" or "-12e-1".
  std::string to_string() const;
  friend bool operator==(const Affine&, const Affine&) = default;
};

enum class RowKind {
  /// L(alpha e + beta, alpha e + beta - c, 6^{2e}) for 1 <= e <= upper.
  Family,
  /// L(d, d - c, 6^n) wherever the residual after the p0-lines is nonnegative.
  General,
  /// A single system.
  Sporadic,
};

/// Exceptional parameters of a General row: b*d = a*n + c, optionally
/// restricted to even n.
struct BoundaryLine {
  Int coef_d = 1;
  Int coef_n = 0;
  Int constant = 0;
  bool n_even = false;

  bool contains(Int n, Int d) const;
  std::string to_string() const;
  friend bool operator==(const BoundaryLine&, const BoundaryLine&) = default;
};

struct ClassificationRow {
  Int d_minus_m0 = 0;
  RowKind kind = RowKind::Sporadic;
  Int alpha = 0;
  Int beta = 0;
  std::optional<Int> e_upper;
  LinearSystem system;
  Affine v;
  Affine ell;
  std::optional<BoundaryLine> boundary;

  std::string system_text() const;
  std::string range_text() const;
  std::string boundary_text() const;

  /// Whether the row covers L(d, d - d_minus_m0, 6^n).
  bool covers(Int n, Int d) const;
  /// Family parameter e for a Family row; General rows use (n, d).
  LinearSystem instantiate_e(Int e) const;
  LinearSystem instantiate_nd(Int n, Int d) const;

  friend bool operator==(const ClassificationRow&, const ClassificationRow&) = default;
};

struct ClassificationBounds {
  Int max_n = 22;
  Int max_degree = 60;
  /// Worker threads for the sweep; 0 picks hardware concurrency.
  unsigned jobs = 0;
};

/// Default search box for a given e_max: n <= max(22, 2(e_max+1)) and
/// d <= max(60, 10(e_max+1)).
ClassificationBounds default_bounds(Int e_max);

/// One special system found by the sweep.
struct SpecialInstance {
  LinearSystem system;
  Int v = 0;
  Int ell = 0;
};

/// Every (-1)-special L(d, m0, 6^n) with 1 <= n <= max_n, m0 <= d <= max_degree.
std::vector<SpecialInstance> special_sweep(const ClassificationBounds& bounds);

/// Fits the sweep into symbolic rows ordered as in the published table.
std::vector<ClassificationRow> generate_classification(Int e_max);
std::vector<ClassificationRow> generate_classification(Int e_max, const ClassificationBounds& bounds);

}  // namespace linsys
