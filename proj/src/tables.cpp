#include "linsys/tables.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "linsys/neg_curves.hpp"

namespace linsys {

namespace {

constexpr Int kTailMult = 6;

const char* bool_text(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false" || s.empty()) return false;
  throw std::invalid_argument("expected true/false, got '" + s + "'");
}

Int parse_int(const std::string& s) {
  std::size_t pos = 0;
  Int v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

/// Sum of terms like "-21n", "+3d", "e", "-1" in the variables n, d, e.
Affine parse_affine(std::string_view text) {
  std::string s = strip(text);
  if (s.empty()) throw std::invalid_argument("empty formula");
  Affine a;
  std::size_t i = 0;
  while (i < s.size()) {
    Int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw std::invalid_argument("bad formula '" + s + "'");
    }
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    bool has_digits = i > start;
    Int mag = has_digits ? parse_int(s.substr(start, i - start)) : 1;
    char var = '\0';
    if (i < s.size() && (s[i] == 'n' || s[i] == 'd' || s[i] == 'e')) var = s[i++];
    if (!has_digits && var == '\0') throw std::invalid_argument("bad formula '" + s + "'");
    Int coef = sign * mag;
    switch (var) {
      case 'n': a.n += coef; break;
      case 'd': a.d += coef; break;
      case 'e': a.e += coef; break;
      default: a.constant += coef;
    }
  }
  return a;
}

/// "d=4n+2, n even" or "2d=9n+2".
BoundaryLine parse_boundary(std::string_view text) {
  std::string s = strip(text);
  BoundaryLine line;
  const std::string even = ",neven";
  if (s.size() > even.size() && s.ends_with(even)) {
    line.n_even = true;
    s.resize(s.size() - even.size());
  }
  auto eq = s.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("boundary needs '='");
  Affine lhs = parse_affine(s.substr(0, eq));
  Affine rhs = parse_affine(s.substr(eq + 1));
  if (lhs.n || lhs.e || lhs.constant || rhs.d || rhs.e) throw std::invalid_argument("bad boundary '" + s + "'");
  line.coef_d = lhs.d;
  line.coef_n = rhs.n;
  line.constant = rhs.constant;
  return line;
}

/// Splits "L(a,b,6^{c})" into its three arguments.
std::vector<std::string> system_args(const std::string& text) {
  std::string s = strip(text);
  if (!s.starts_with("L(") || !s.ends_with(")")) throw std::invalid_argument("bad row system '" + s + "'");
  s = s.substr(2, s.size() - 3);
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  if (out.size() != 3) throw std::invalid_argument("row system needs three arguments: '" + text + "'");
  return out;
}

ClassificationRow parse_symbolic_row(const std::vector<std::string>& f) {
  if (f.size() != 6) throw std::invalid_argument("symbolic row needs 6 fields");
  ClassificationRow row;
  row.d_minus_m0 = parse_int(f[0]);
  auto args = system_args(f[1]);
  const std::string& tail = args[2];
  if (tail == "6^{n}") {
    row.kind = RowKind::General;
  } else if (tail == "6^{2e}") {
    row.kind = RowKind::Family;
    Affine d = parse_affine(args[0]);
    row.alpha = d.e;
    row.beta = d.constant;
    std::string r = strip(f[4]);
    if (r != "e>=1") {
      auto pos = r.find(">=e>=1");
      if (pos == std::string::npos) throw std::invalid_argument("bad family range '" + r + "'");
      row.e_upper = parse_int(r.substr(0, pos));
    }
  } else {
    row.kind = RowKind::Sporadic;
    if (!tail.starts_with("6^{") || !tail.ends_with("}")) throw std::invalid_argument("bad tail '" + tail + "'");
    Int n = parse_int(tail.substr(3, tail.size() - 4));
    row.system = LinearSystem::quasi_homogeneous(parse_int(args[0]), parse_int(args[1]), kTailMult,
                                                 static_cast<std::size_t>(n));
  }
  row.v = parse_affine(f[2]);
  row.ell = parse_affine(f[3]);
  if (!f[5].empty()) row.boundary = parse_boundary(f[5]);
  if (row.system_text() != strip(f[1]) || row.range_text() != f[4]) {
    throw std::invalid_argument("row '" + f[1] + "' does not round-trip");
  }
  return row;
}

std::string range_of(Int e) { return "e=" + std::to_string(e); }
std::string range_of(Int n, Int d) { return "n=" + std::to_string(n) + ",d=" + std::to_string(d); }

}  // namespace

// --- generation ---------------------------------------------------------------------

std::vector<InstanceRow> instantiate_rows(const std::vector<ClassificationRow>& rows, Int e_max,
                                          Int max_degree) {
  if (e_max < 1) throw std::invalid_argument("e_max must be at least 1");
  std::vector<InstanceRow> out;
  for (const auto& row : rows) {
    std::string family = row.system_text();
    switch (row.kind) {
      case RowKind::Family: {
        Int last = row.e_upper ? std::min(e_max, *row.e_upper) : e_max;
        for (Int e = 1; e <= last; ++e) {
          InstanceRow r;
          r.d_minus_m0 = row.d_minus_m0;
          r.system = row.instantiate_e(e);
          r.v = row.v.eval(0, 0, e);
          r.ell = row.ell.eval(0, 0, e);
          r.range = range_of(e);
          r.family = family;
          out.push_back(std::move(r));
        }
        break;
      }
      case RowKind::General: {
        for (Int d = std::max<Int>(row.d_minus_m0, 1); d <= max_degree; ++d) {
          for (Int n = 1;; ++n) {
            if (!row.covers(n, d)) {
              if (row.ell.eval(n, d, 0) < 0) break;
              continue;
            }
            InstanceRow r;
            r.d_minus_m0 = row.d_minus_m0;
            r.system = row.instantiate_nd(n, d);
            r.v = row.v.eval(n, d, 0);
            r.range = range_of(n, d);
            r.family = family;
            if (row.boundary && row.boundary->contains(n, d)) {
              r.boundary_case = true;
              r.ell = hh_split(r.system).ell;
            } else {
              r.ell = row.ell.eval(n, d, 0);
            }
            out.push_back(std::move(r));
          }
        }
        break;
      }
      case RowKind::Sporadic: {
        InstanceRow r;
        r.d_minus_m0 = row.d_minus_m0;
        r.system = row.system;
        r.v = row.v.constant;
        r.ell = row.ell.constant;
        r.family = family;
        out.push_back(std::move(r));
        break;
      }
    }
  }
  return out;
}

std::vector<InstanceRow> theorem2_table(Int e_max, Int max_degree) {
  return instantiate_rows(generate_classification(e_max), e_max, max_degree);
}

const std::vector<ExceptionEntry>& section7_exceptions() {
  static const std::vector<ExceptionEntry> entries = [] {
    // (d, m0, n, regular, direct)
    struct Raw {
      Int d, m0, n;
      bool regular, direct;
    };
    static constexpr Raw raw[] = {
        {8, 0, 3, false, false},   {9, 1, 3, false, false},   {14, 0, 6, false, false},
        {14, 1, 6, false, false},  {14, 2, 6, false, false},  {14, 3, 6, false, false},
        {14, 4, 6, false, false},  {14, 6, 5, false, false},  {15, 0, 7, false, false},
        {15, 0, 6, true, false},   {15, 1, 6, true, false},   {15, 2, 6, true, false},
        {15, 3, 6, true, false},   {15, 4, 6, false, false},  {15, 5, 6, false, false},
        {15, 6, 6, false, false},  {15, 6, 5, true, false},   {15, 7, 5, true, false},
        {16, 0, 8, false, false},  {16, 0, 7, true, false},   {16, 1, 7, true, false},
        {16, 2, 7, true, false},   {16, 3, 7, false, false},  {16, 4, 7, false, false},
        {16, 5, 7, false, false},  {16, 6, 7, false, false},  {16, 6, 6, true, false},
        {16, 7, 6, false, false},  {16, 8, 6, false, false},  {17, 0, 8, true, false},
        {17, 1, 8, true, false},   {17, 2, 8, false, false},  {17, 6, 7, true, false},
        {17, 7, 7, false, false},  {17, 8, 7, false, false},  {18, 10, 7, false, false},
        {19, 0, 10, false, false}, {19, 1, 10, false, false}, {19, 2, 10, false, false},
        {19, 4, 9, true, false},   {19, 5, 9, true, false},   {19, 6, 9, false, false},
        {19, 7, 9, false, false},  {19, 10, 7, true, false},  {19, 11, 7, false, false},
        {20, 8, 9, true, true},    {20, 9, 9, false, false},  {20, 12, 7, true, false},
        {21, 10, 9, true, false},  {21, 11, 9, false, false}, {21, 12, 8, true, false},
        {21, 13, 8, false, false}, {22, 0, 13, true, false},  {22, 1, 13, true, false},
        {22, 2, 13, false, false}, {22, 3, 13, false, false}, {22, 6, 12, true, false},
        {22, 7, 12, false, true},  {22, 9, 11, false, true},  {22, 11, 10, false, false},
        {22, 12, 10, false, false}, {22, 12, 9, true, false}, {22, 13, 9, false, false},
        {22, 14, 9, false, false}, {23, 11, 11, true, true},  {23, 13, 10, false, false},
        {23, 14, 9, true, false},  {23, 15, 9, false, false}, {24, 14, 10, true, false},
        {24, 15, 10, false, false}, {24, 16, 10, false, false}, {25, 12, 13, false, true},
        {25, 15, 11, false, false}, {26, 14, 13, false, true}, {29, 19, 13, true, true},
        {31, 18, 17, false, true}, {31, 21, 14, true, false}, {38, 28, 18, false, false},
        {40, 27, 23, false, true}, {40, 30, 19, false, true}, {46, 36, 22, false, false},
    };
    std::vector<ExceptionEntry> out;
    for (const auto& r : raw) {
      out.push_back({LinearSystem::quasi_homogeneous(r.d, r.m0, kTailMult, static_cast<std::size_t>(r.n)),
                     r.regular ? DimStatus::Regular : DimStatus::Empty, r.direct});
    }
    return out;
  }();
  return entries;
}

// --- CSV ------------------------------------------------------------------------------

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote in CSV");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_field(std::string_view field) {
  bool needs = field.find_first_of(",\"\n") != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

const char* kSymbolicHeader = "d_minus_m0,system,v,ell,range,boundary_case";
const char* kInstanceHeader = "d_minus_m0,system,v,ell,range,boundary_case,family";
const char* kExceptionHeader = "system,status,direct_computation";

std::vector<std::vector<std::string>> body(std::string_view text, const char* header) {
  auto rows = parse_csv(text);
  if (rows.empty()) throw std::invalid_argument("empty CSV");
  std::string got;
  for (std::size_t i = 0; i < rows[0].size(); ++i) got += (i ? "," : "") + rows[0][i];
  if (got != header) throw std::invalid_argument("unexpected CSV header '" + got + "'");
  rows.erase(rows.begin());
  return rows;
}

/// Sporadic system text as written in the tables, e.g. "L(13,2,6^5)".
std::string exception_text(const LinearSystem& s) { return s.to_string(); }

}  // namespace

std::string symbolic_csv(const std::vector<ClassificationRow>& rows) {
  std::ostringstream os;
  os << kSymbolicHeader << '\n';
  for (const auto& r : rows) {
    os << r.d_minus_m0 << ',' << csv_field(r.system_text()) << ',' << csv_field(r.v.to_string()) << ','
       << csv_field(r.ell.to_string()) << ',' << csv_field(r.range_text()) << ',' << csv_field(r.boundary_text())
       << '\n';
  }
  return os.str();
}

std::vector<ClassificationRow> parse_symbolic_csv(std::string_view text) {
  std::vector<ClassificationRow> out;
  for (const auto& f : body(text, kSymbolicHeader)) out.push_back(parse_symbolic_row(f));
  return out;
}

nlohmann::json symbolic_json(const std::vector<ClassificationRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"d_minus_m0", r.d_minus_m0},
                   {"system", r.system_text()},
                   {"v", r.v.to_string()},
                   {"ell", r.ell.to_string()},
                   {"range", r.range_text()},
                   {"boundary_case", r.boundary_text()}});
  }
  return arr;
}

std::string instance_csv(const std::vector<InstanceRow>& rows) {
  std::ostringstream os;
  os << kInstanceHeader << '\n';
  for (const auto& r : rows) {
    os << r.d_minus_m0 << ',' << csv_field(r.system.to_string()) << ',' << r.v << ',' << r.ell << ','
       << csv_field(r.range) << ',' << bool_text(r.boundary_case) << ',' << csv_field(r.family) << '\n';
  }
  return os.str();
}

std::vector<InstanceRow> parse_instance_csv(std::string_view text) {
  std::vector<InstanceRow> out;
  for (const auto& f : body(text, kInstanceHeader)) {
    if (f.size() != 7) throw std::invalid_argument("instance row needs 7 fields");
    InstanceRow r;
    r.d_minus_m0 = parse_int(f[0]);
    r.system = LinearSystem::parse(f[1]);
    r.v = parse_int(f[2]);
    r.ell = parse_int(f[3]);
    r.range = f[4];
    r.boundary_case = parse_bool(f[5]);
    r.family = f[6];
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json instance_json(const std::vector<InstanceRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"d_minus_m0", r.d_minus_m0},
                   {"system", r.system.to_string()},
                   {"v", r.v},
                   {"ell", r.ell},
                   {"range", r.range},
                   {"boundary_case", r.boundary_case},
                   {"family", r.family}});
  }
  return arr;
}

std::string exceptions_csv(const std::vector<ExceptionEntry>& entries) {
  std::ostringstream os;
  os << kExceptionHeader << '\n';
  for (const auto& e : entries) {
    os << csv_field(exception_text(e.system)) << ',' << to_string(e.status) << ','
       << bool_text(e.direct_computation) << '\n';
  }
  return os.str();
}

std::vector<ExceptionEntry> parse_exceptions_csv(std::string_view text) {
  std::vector<ExceptionEntry> out;
  for (const auto& f : body(text, kExceptionHeader)) {
    if (f.size() != 3) throw std::invalid_argument("exception row needs 3 fields");
    ExceptionEntry e;
    e.system = LinearSystem::parse(f[0]);
    if (f[1] == "Empty") e.status = DimStatus::Empty;
    else if (f[1] == "Regular") e.status = DimStatus::Regular;
    else throw std::invalid_argument("unexpected status '" + f[1] + "'");
    e.direct_computation = parse_bool(f[2]);
    out.push_back(std::move(e));
  }
  return out;
}

// --- verification ---------------------------------------------------------------------

VerifyMode parse_verify_mode(std::string_view name) {
  if (name == "formula") return VerifyMode::Formula;
  if (name == "hh") return VerifyMode::Hh;
  if (name == "oracle") return VerifyMode::Oracle;
  throw std::invalid_argument("unknown verify mode '" + std::string(name) + "'");
}

std::string_view to_string(VerifyMode mode) {
  switch (mode) {
    case VerifyMode::Formula: return "formula";
    case VerifyMode::Hh: return "hh";
    case VerifyMode::Oracle: return "oracle";
  }
  return "?";
}

VerifyReport verify_table(const std::vector<InstanceRow>& rows, VerifyMode mode, const VerifyLimits& limits) {
  VerifyReport report;
  report.mode = mode;
  report.checks.resize(rows.size());

  auto check_one = [&](std::size_t i) {
    const InstanceRow& row = rows[i];
    RowCheck c;
    c.system = row.system.to_string();
    const std::string quoted = "'" + c.system + "'";
    switch (mode) {
      case VerifyMode::Formula:
        c.expected = row.v;
        c.actual = virtual_dim(row.system);
        c.reproduce = "linsys vdim " + quoted;
        break;
      case VerifyMode::Hh:
        c.expected = row.ell;
        c.actual = hh_split(row.system).ell;
        c.reproduce = "linsys classify " + quoted;
        break;
      case VerifyMode::Oracle: {
        c.expected = row.ell;
        const auto& o = limits.oracle;
        c.reproduce = "linsys oracle --system " + quoted + " --prime " + std::to_string(o.prime) + " --seed " +
                      std::to_string(o.seed) + " --trials " + std::to_string(o.trials);
        if (row.system.degree() > limits.max_degree) {
          c.skipped = true;
          break;
        }
        c.actual = dimension_char_p(row.system, o).ell;
        break;
      }
    }
    c.passed = !c.skipped && c.actual == c.expected;
    report.checks[i] = std::move(c);
  };

  unsigned jobs = std::max(1u, limits.jobs);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < rows.size(); i = next++) check_one(i);
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
      next = rows.size();
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  for (const auto& c : report.checks) {
    if (c.skipped) ++report.skipped;
    else if (c.passed) ++report.passed;
    else ++report.failed;
  }
  return report;
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"system", c.system},
                      {"expected", c.expected},
                      {"actual", c.actual},
                      {"result", c.skipped ? "skip" : (c.passed ? "pass" : "fail")},
                      {"reproduce", c.reproduce}});
  }
  return {{"mode", to_string(report.mode)},
          {"passed", report.passed},
          {"failed", report.failed},
          {"skipped", report.skipped},
          {"checks", checks}};
}

}  // namespace linsys
