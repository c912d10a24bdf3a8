#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "linsys/cremona.hpp"
#include "linsys/degeneration.hpp"
#include "linsys/neg_curves.hpp"
#include "linsys/oracle.hpp"
#include "linsys/tables.hpp"

namespace linsys::cli {

namespace {

using nlohmann::json;

/// Bad user input that is not a system-string parse error.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Early exit with a fixed status.
struct Exit {
  int code;
};

struct Globals {
  std::uint32_t prime = kDefaultPrime;
  std::uint64_t seed = 42;
  int trials = 3;
  std::size_t budget = 200000;
  bool json = false;
  unsigned jobs = 1;
  std::string kernel = "auto";

  OracleOptions oracle() const {
    OracleOptions o;
    o.prime = prime;
    o.seed = seed;
    o.trials = trials;
    o.kernel = kernels::parse_kernel(kernel);
    return o;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

std::size_t trace_size(const TracePtr& trace) {
  return trace ? trace_to_json(trace).at("nodes").size() : 0;
}

// --- subcommands ----------------------------------------------------------------------

int cmd_dim(const Globals& g, const std::string& text, const std::string& certificate, bool no_oracle,
            std::ostream& out) {
  LinearSystem L = LinearSystem::parse(text);
  ProverOptions opt;
  opt.max_nodes = g.budget;
  opt.use_oracle = !no_oracle;
  opt.oracle = g.oracle();
  DimVerdict v = recursive_dim(L, opt);
  std::size_t nodes = trace_size(v.trace);
  if (!certificate.empty()) write_output(certificate, trace_to_json(v.trace).dump(1) + "\n", out);
  if (g.json) {
    json j = to_json(v, false);
    j["input"] = text;
    j["trace_nodes"] = nodes;
    if (!certificate.empty()) j["certificate"] = certificate;
    out << j.dump() << '\n';
  } else {
    out << v.trace->system.to_string() << ": " << to_string(v.status);
    if (v.decisive()) out << ", ell = " << v.ell;
    out << " (" << v.trace->method << ", " << nodes << " trace nodes)\n";
  }
  return v.decisive() ? kOk : kUnknown;
}

int cmd_vdim(const Globals& g, const std::string& text, std::ostream& out) {
  LinearSystem L = LinearSystem::parse(text);
  Int v = virtual_dim(L), e = expected_dim(L);
  if (g.json) {
    out << json{{"system", L.to_string()}, {"v", v}, {"e", e}}.dump() << '\n';
  } else {
    out << L.to_string() << ": v = " << v << ", e = " << e << '\n';
  }
  return kOk;
}

int cmd_classify(const Globals& g, const std::string& text, std::ostream& out) {
  LinearSystem L = LinearSystem::parse(text);
  SpecialityResult r = is_minus_one_special(L);
  std::optional<Int> hh_ell;
  if (in_proven_regime(L.normalized())) hh_ell = hh_split(L).ell;
  if (g.json) {
    json j = {{"system", L.normalized().to_string()},
              {"special", r.special},
              {"empty_by_overlap", r.empty_by_overlap},
              {"v", virtual_dim(L)}};
    j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
    j["hh_ell"] = hh_ell ? json(*hh_ell) : json(nullptr);
    out << j.dump() << '\n';
    return kOk;
  }
  out << L.normalized().to_string() << ": " << (r.special ? "(-1)-special" : "not (-1)-special");
  if (r.empty_by_overlap) out << " (empty: two negative (-1)-curves meet)";
  out << ", v = " << virtual_dim(L);
  if (hh_ell) out << ", ell = " << *hh_ell;
  out << '\n';
  if (r.witness) {
    for (const auto& e : r.witness->entries) {
      out << "  " << e.multiplicity << " x " << e.curve.entry.name() << " = " << e.curve.cls.to_string() << '\n';
    }
    out << "  residual " << r.witness->residual.to_string() << ", v = " << virtual_dim(r.witness->residual) << '\n';
  }
  return kOk;
}

std::vector<std::size_t> parse_slots(const std::string& text, std::size_t expected) {
  std::vector<std::size_t> slots;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      long long v = std::stoll(item, &pos);
      if (pos != item.size() || v < 0) throw std::invalid_argument(item);
      slots.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InputError("bad slot list '" + text + "'");
    }
  }
  if (slots.size() != expected) {
    throw InputError("'" + text + "' needs " + std::to_string(expected) + " comma-separated slots");
  }
  return slots;
}

int cmd_cremona(const Globals& g, const std::string& text, const std::vector<std::string>& moves,
                std::ostream& out) {
  LinearSystem L = LinearSystem::parse(text);
  std::vector<Move> transcript;
  bool empty = false;
  LinearSystem result = L;
  if (moves.empty()) {
    Reduction red = standard_reduce(L);
    transcript = std::move(red.transcript);
    result = red.result;
    empty = red.empty;
  } else {
    for (const auto& spec : moves) {
      // "i,j,k" is a Cremona move, "i,j" a fixed-line split.
      std::size_t commas = static_cast<std::size_t>(std::count(spec.begin(), spec.end(), ','));
      auto slots = parse_slots(spec, commas + 1);
      Move m;
      m.before = result;
      m.slots = slots;
      if (slots.size() == 3) {
        m.type = Move::Type::Cremona;
        result = cremona(result, slots[0], slots[1], slots[2]);
      } else if (slots.size() == 2) {
        m.type = Move::Type::Line;
        result = split_fixed_line(result, slots[0], slots[1]);
      } else {
        throw InputError("a move takes two (line) or three (Cremona) slots");
      }
      m.after = result;
      transcript.push_back(std::move(m));
    }
  }
  if (g.json) {
    json moves_json = json::array();
    for (const auto& m : transcript) moves_json.push_back(to_json(m));
    out << json{{"system", L.to_string()},
                {"result", result.to_string()},
                {"v", virtual_dim(L)},
                {"result_v", virtual_dim(result)},
                {"standard_form", is_standard_form(result)},
                {"empty", empty},
                {"transcript", moves_json}}
               .dump()
        << '\n';
    return kOk;
  }
  for (const auto& m : transcript) {
    out << (m.type == Move::Type::Line ? "line    " : "cremona ");
    for (std::size_t i = 0; i < m.slots.size(); ++i) out << (i ? "," : "") << m.slots[i];
    out << ": " << m.before.to_string() << " -> " << m.after.to_string() << '\n';
  }
  out << "result " << result.to_string() << ", v = " << virtual_dim(result);
  if (empty) out << " (a multiplicity exceeds the degree: empty)";
  else if (is_standard_form(result)) out << " (standard form)";
  out << '\n';
  return kOk;
}

int cmd_degen(const Globals& g, const std::string& text, Int k, Int b, std::ostream& out) {
  LinearSystem L = LinearSystem::parse(text);
  DegenerationSplit s;
  try {
    s = degenerate(L, k, b);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  } catch (const std::domain_error& e) {
    throw InputError(e.what());
  }
  if (g.json) {
    out << to_json(s).dump() << '\n';
    return kOk;
  }
  out << "(" << k << "," << b << ")-degeneration of " << s.system.to_string() << '\n';
  out << "  L_P    " << s.L_P.to_string() << "  v = " << s.v_P << '\n';
  out << "  L_F    " << s.L_F.to_string() << "  v = " << s.v_F << '\n';
  out << "  hatL_P " << s.hatL_P.to_string() << "  v = " << s.hat_v_P << '\n';
  out << "  hatL_F " << s.hatL_F.to_string() << "  v = " << s.hat_v_F << '\n';
  return kOk;
}

int cmd_oracle(const Globals& g, const std::string& text, std::ostream& out) {
  LinearSystem L = LinearSystem::parse(text);
  OracleOptions o = g.oracle();
  try {
    validate_prime(L, o.prime);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  OracleResult r = dimension_char_p(L, o);
  if (g.json) {
    json j = to_json(r);
    j["system"] = L.to_string();
    j["prime"] = o.prime;
    j["seed"] = o.seed;
    j["trials"] = o.trials;
    j["kernel"] = to_string(kernels::resolve(o.kernel, o.prime));
    out << j.dump() << '\n';
  } else {
    out << L.to_string() << ": ell = " << r.ell << " over F_" << o.prime << " (rank " << r.rank << " of " << r.rows
        << "x" << r.cols << ", trial " << r.best_trial << ")";
    if (r.certified_regular) out << ", certifies ell = e";
    out << '\n';
  }
  return kOk;
}

int cmd_check_certificate(const Globals& g, const std::string& path, bool no_oracle, std::ostream& out) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  // Accept a bare trace or the JSON output of `dim` with an embedded trace.
  if (doc.contains("trace")) doc = doc.at("trace");
  TracePtr root;
  try {
    root = trace_from_json(doc);
  } catch (const std::exception& e) {
    throw InputError(path + ": malformed trace: " + e.what());
  }
  ReplayOptions opt;
  opt.recheck_oracle = !no_oracle;
  opt.kernel = kernels::parse_kernel(g.kernel);
  CertificateReport rep = check_certificate(root, opt);
  if (g.json) {
    out << json{{"ok", rep.ok},
                {"system", root->system.to_string()},
                {"status", to_string(root->status)},
                {"nodes_checked", rep.nodes_checked},
                {"failures", rep.failures}}
               .dump()
        << '\n';
  } else {
    out << root->system.to_string() << ": " << (rep.ok ? "certificate OK" : "certificate REJECTED") << " ("
        << rep.nodes_checked << " nodes checked)\n";
    for (const auto& f : rep.failures) out << "  " << f << '\n';
  }
  return rep.ok ? kOk : kUnknown;
}

int cmd_table_generate(const Globals& g, Int e_max, Int max_degree, bool symbolic, const std::string& output,
                       std::ostream& out) {
  if (e_max < 1) throw InputError("--e-max must be at least 1");
  ClassificationBounds bounds = default_bounds(e_max);
  bounds.jobs = g.jobs;
  auto rows = generate_classification(e_max, bounds);
  std::string text;
  if (symbolic) {
    text = g.json ? symbolic_json(rows).dump(1) + "\n" : symbolic_csv(rows);
  } else {
    auto inst = instantiate_rows(rows, e_max, max_degree);
    text = g.json ? instance_json(inst).dump(1) + "\n" : instance_csv(inst);
  }
  write_output(output, text, out);
  return kOk;
}

int cmd_table_verify(const Globals& g, const std::string& mode_name, Int e_max, Int max_degree,
                     const std::string& input, bool verbose, std::ostream& out) {
  VerifyMode mode;
  try {
    mode = parse_verify_mode(mode_name);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  std::vector<InstanceRow> rows;
  if (!input.empty()) {
    try {
      rows = parse_instance_csv(read_file(input));
    } catch (const std::invalid_argument& e) {
      throw InputError(input + ": " + e.what());
    }
  } else {
    if (e_max < 1) throw InputError("--e-max must be at least 1");
    ClassificationBounds bounds = default_bounds(e_max);
    bounds.jobs = g.jobs;
    rows = instantiate_rows(generate_classification(e_max, bounds), e_max, max_degree);
  }
  VerifyLimits limits;
  limits.max_degree = max_degree;
  limits.oracle = g.oracle();
  limits.jobs = g.jobs;
  VerifyReport rep = verify_table(rows, mode, limits);
  if (g.json) {
    out << to_json(rep).dump() << '\n';
  } else {
    for (const auto& c : rep.checks) {
      if (!verbose && (c.passed || c.skipped)) continue;
      const char* tag = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
      out << tag << ' ' << c.system << " expected " << c.expected;
      if (!c.skipped) out << " got " << c.actual;
      out << "  # " << c.reproduce << '\n';
    }
    out << to_string(mode) << ": " << rep.passed << " passed, " << rep.failed << " failed, " << rep.skipped
        << " skipped\n";
  }
  return rep.ok() ? kOk : kUnknown;
}

int cmd_table_exceptions(const Globals& g, bool check, std::ostream& out) {
  const auto& entries = section7_exceptions();
  if (!check) {
    if (g.json) {
      json arr = json::array();
      for (const auto& e : entries) {
        arr.push_back({{"system", e.system.to_string()},
                       {"status", to_string(e.status)},
                       {"direct_computation", e.direct_computation}});
      }
      out << arr.dump(1) << '\n';
    } else {
      out << exceptions_csv(entries);
    }
    return kOk;
  }
  ProverOptions opt;
  opt.max_nodes = g.budget;
  opt.oracle = g.oracle();
  Prover prover(opt);
  std::size_t bad = 0;
  json arr = json::array();
  for (const auto& e : entries) {
    DimVerdict v = e.direct_computation
                       ? (dimension_char_p(e.system, opt.oracle).certified_regular
                              ? make_verdict("oracle", e.system, status_for(e.system, expected_dim(e.system)),
                                             expected_dim(e.system))
                              : make_verdict("oracle", e.system, DimStatus::Unknown, -1))
                       : prover.dimension(e.system);
    bool match = v.status == e.status;
    bad += match ? 0 : 1;
    if (g.json) {
      arr.push_back({{"system", e.system.to_string()},
                     {"expected", to_string(e.status)},
                     {"got", to_string(v.status)},
                     {"method", v.trace->method},
                     {"match", match}});
    } else {
      out << (match ? "PASS " : "FAIL ") << e.system.to_string() << " expected " << to_string(e.status) << " got "
          << to_string(v.status) << " (" << v.trace->method << ")\n";
    }
  }
  if (g.json) out << json{{"mismatches", bad}, {"checks", arr}}.dump() << '\n';
  else out << entries.size() - bad << "/" << entries.size() << " match\n";
  return bad == 0 ? kOk : kUnknown;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dimensions of planar linear systems with multiple base points"};
  app.name("linsys");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option defaults (command-line flags win)");

  Globals g;
  app.add_option("--prime", g.prime, "Prime for the finite-field oracle")->capture_default_str();
  app.add_option("--seed", g.seed, "Oracle RNG seed")->capture_default_str();
  app.add_option("--trials", g.trials, "Oracle trials")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--budget", g.budget, "Prover node budget")->capture_default_str();
  app.add_flag("--json", g.json, "Emit one JSON document");
  app.add_option("--jobs", g.jobs, "Worker threads for sweeps")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--kernel", g.kernel, "Elimination kernel")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  std::string system_text, certificate, path, mode = "formula", input, output;
  std::vector<std::string> moves;
  bool no_oracle = false, symbolic = false, verbose = false, check = false;
  Int k = 5, b = 0, e_max = 4, max_degree = 26;

  auto* dim = app.add_subcommand("dim", "Certified dimension via the recursive prover");
  dim->add_option("system", system_text, "System, e.g. L(10,2,6^3)")->required();
  dim->add_option("--certificate", certificate, "Write the verdict trace (JSON) to this file");
  dim->add_flag("--no-oracle", no_oracle, "Disable the finite-field fallback");

  auto* vdim = app.add_subcommand("vdim", "Virtual and expected dimension");
  vdim->add_option("system", system_text)->required();

  auto* classify = app.add_subcommand("classify", "(-1)-speciality test with witness");
  classify->add_option("system", system_text)->required();

  auto* crem = app.add_subcommand("cremona", "Cremona moves, or reduction to standard form");
  crem->add_option("system", system_text)->required();
  crem->add_option("--move", moves, "Slots i,j,k (Cremona) or i,j (fixed line); slot 0 is p0");

  auto* degen = app.add_subcommand("degen", "Show a (k,b)-degeneration split");
  degen->add_option("system", system_text)->required();
  degen->add_option("-k,--k", k)->capture_default_str();
  degen->add_option("-b,--b", b)->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "Dimension by interpolation-matrix rank over F_p");
  oracle->add_option("system,--system", system_text)->required();

  auto* cert = app.add_subcommand("check-certificate", "Replay a verdict trace without search");
  cert->add_option("file", path)->required();
  cert->add_flag("--no-oracle-recheck", no_oracle, "Accept recorded oracle ranks without recomputing");

  auto* table = app.add_subcommand("table", "Classification tables");
  table->require_subcommand(1);
  auto* gen = table->add_subcommand("generate", "Generate the classification table");
  gen->add_option("--e-max", e_max)->capture_default_str();
  gen->add_option("--max-degree", max_degree, "Degree bound for general rows")->capture_default_str();
  gen->add_flag("--symbolic", symbolic, "Symbolic rows instead of instances");
  gen->add_option("-o,--output", output, "Output file (default stdout)");
  auto* ver = table->add_subcommand("verify", "Verify table rows");
  ver->add_option("--mode", mode)->capture_default_str()->check(CLI::IsMember({"formula", "hh", "oracle"}));
  ver->add_option("--e-max", e_max)->capture_default_str();
  ver->add_option("--max-degree", max_degree)->capture_default_str();
  ver->add_option("--input", input, "Instance CSV to verify instead of a fresh table");
  ver->add_flag("-v,--verbose", verbose, "List passing rows too");
  auto* exc = table->add_subcommand("exceptions", "Low-degree exception list");
  exc->add_flag("--check", check, "Re-derive every verdict");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (*dim) return cmd_dim(g, system_text, certificate, no_oracle, out);
    if (*vdim) return cmd_vdim(g, system_text, out);
    if (*classify) return cmd_classify(g, system_text, out);
    if (*crem) return cmd_cremona(g, system_text, moves, out);
    if (*degen) return cmd_degen(g, system_text, k, b, out);
    if (*oracle) return cmd_oracle(g, system_text, out);
    if (*cert) return cmd_check_certificate(g, path, no_oracle, out);
    if (*gen) return cmd_table_generate(g, e_max, max_degree, symbolic, output, out);
    if (*ver) return cmd_table_verify(g, mode, e_max, max_degree, input, verbose, out);
    if (*exc) return cmd_table_exceptions(g, check, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n' << e.caret() << '\n';
    return kInputError;
  } catch (const CremonaError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kUnknown;
  }
  return kInputError;
}

}  // namespace linsys::cli
