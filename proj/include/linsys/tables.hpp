#pragma once

// The classification table (symbolic and instantiated), the low-degree
// exception list, their CSV/JSON forms and per-row verification.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "linsys/classification.hpp"
#include "linsys/oracle.hpp"
#include "linsys/verdict.hpp"

namespace linsys {

/// A concrete system from a table row.
struct InstanceRow {
  Int d_minus_m0 = 0;
  LinearSystem system;
  Int v = 0;
  Int ell = 0;
  /// Parameter assignment, e.g. "e=2" or "n=3,d=17"; empty for sporadic rows.
  std::string range;
  /// ell comes from curve removal instead of the row formula.
  bool boundary_case = false;
  /// The symbolic row this instance belongs to.
  std::string family;

  friend bool operator==(const InstanceRow&, const InstanceRow&) = default;
};

/// Family rows for e <= min(e_max, upper bound), general rows with
/// d <= max_degree, and every sporadic row.
std::vector<InstanceRow> theorem2_table(Int e_max, Int max_degree = 26);
std::vector<InstanceRow> instantiate_rows(const std::vector<ClassificationRow>& rows, Int e_max,
                                          Int max_degree);

struct ExceptionEntry {
  LinearSystem system;
  DimStatus status = DimStatus::Empty;
  /// Settled only by a direct rank computation.
  bool direct_computation = false;
};

/// The low-degree systems the degeneration program cannot settle on its own.
const std::vector<ExceptionEntry>& section7_exceptions();

// --- CSV / JSON ---------------------------------------------------------------------

std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string csv_field(std::string_view field);

std::string symbolic_csv(const std::vector<ClassificationRow>& rows);
std::vector<ClassificationRow> parse_symbolic_csv(std::string_view text);
nlohmann::json symbolic_json(const std::vector<ClassificationRow>& rows);

std::string instance_csv(const std::vector<InstanceRow>& rows);
std::vector<InstanceRow> parse_instance_csv(std::string_view text);
nlohmann::json instance_json(const std::vector<InstanceRow>& rows);

std::string exceptions_csv(const std::vector<ExceptionEntry>& entries);
std::vector<ExceptionEntry> parse_exceptions_csv(std::string_view text);

// --- verification -------------------------------------------------------------------

enum class VerifyMode { Formula, Hh, Oracle };
VerifyMode parse_verify_mode(std::string_view name);
std::string_view to_string(VerifyMode mode);

struct VerifyLimits {
  /// Oracle mode skips rows above this degree.
  Int max_degree = 26;
  OracleOptions oracle;
  unsigned jobs = 1;
};

struct RowCheck {
  std::string system;
  Int expected = 0;
  Int actual = 0;
  bool passed = false;
  bool skipped = false;
  std::string reproduce;
};

struct VerifyReport {
  VerifyMode mode = VerifyMode::Formula;
  std::vector<RowCheck> checks;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;

  bool ok() const noexcept { return failed == 0; }
};

VerifyReport verify_table(const std::vector<InstanceRow>& rows, VerifyMode mode, const VerifyLimits& limits = {});
nlohmann::json to_json(const VerifyReport& report);

}  // namespace linsys
