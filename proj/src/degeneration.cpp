#include "linsys/degeneration.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "linsys/cremona.hpp"
#include "linsys/neg_curves.hpp"

namespace linsys {

// --- degeneration arithmetic ----------------------------------------------------

DegenerationSplit degenerate(const LinearSystem& system, Int k, Int b) {
  LinearSystem L = system.normalized();
  if (!L.is_quasi_homogeneous()) {
    throw std::invalid_argument(L.to_string() + " is not quasi-homogeneous");
  }
  const Int d = L.degree();
  const auto n = static_cast<Int>(L.tail_points());
  if (k < 1 || k >= d) throw std::out_of_range("k must satisfy 1 <= k < d");
  if (b < 0 || b > n) throw std::out_of_range("b must satisfy 0 <= b <= n");
  const Int m0 = L.m0();
  const Int m = L.max_tail_multiplicity();
  const auto rest = static_cast<std::size_t>(n - b);
  const auto moved = static_cast<std::size_t>(b);

  DegenerationSplit s;
  s.d = d;
  s.k = k;
  s.b = b;
  s.system = L;
  s.L_P = LinearSystem::quasi_homogeneous(d - k, m0, m, rest);
  s.L_F = LinearSystem::quasi_homogeneous(d, d - k, m, moved);
  s.hatL_P = LinearSystem::quasi_homogeneous(d - k - 1, m0, m, rest);
  s.hatL_F = LinearSystem::quasi_homogeneous(d, d - k + 1, m, moved);
  s.v_P = virtual_dim(s.L_P);
  s.v_F = virtual_dim(s.L_F);
  s.hat_v_P = virtual_dim(s.hatL_P);
  s.hat_v_F = virtual_dim(s.hatL_F);
  if (s.v_P + s.hat_v_F != virtual_dim(L) - 1) {
    throw std::logic_error("degeneration identity failed on " + L.to_string());
  }
  return s;
}

Int key_lemma_dim(const DegenerationSplit& split, Int ell_P, Int ell_F, Int ell_hat_P, Int ell_hat_F) {
  const Int r_P = ell_P - ell_hat_P - 1;
  const Int r_F = ell_F - ell_hat_F - 1;
  const Int bound = split.d - split.k - 1;
  const Int transversal = ell_hat_P + ell_hat_F + 1;
  const Int spanning = ell_P + ell_F - split.d + split.k;
  if (r_P + r_F == bound && transversal != spanning) {
    throw std::logic_error("key lemma branches disagree at the overlap");
  }
  return r_P + r_F <= bound ? transversal : spanning;
}

std::vector<Int> b_scan_order(const LinearSystem& system, Int k) {
  (void)k;
  const auto n = static_cast<Int>(system.normalized().tail_points());
  std::vector<Int> order;
  if (n < 1) return order;
  const Int start = std::min(n - 1, 2 * system.degree() / 7);
  for (Int b = start; b >= 0; --b) order.push_back(b);
  for (Int b = start + 1; b <= n - 1; ++b) order.push_back(b);
  return order;
}

// --- prover -----------------------------------------------------------------------

struct Prover::Context {
  std::size_t nodes = 0;
  std::vector<std::string> stack;
};

Prover::Prover(ProverOptions options) : options_(std::move(options)) {}

std::size_t Prover::memo_size() const {
  std::lock_guard lock(mutex_);
  return memo_.size();
}

DimVerdict Prover::dimension(const LinearSystem& system) {
  Context ctx;
  return solve(system, ctx, 0).verdict;
}

namespace {

DimVerdict unknown(const LinearSystem& system, const std::string& reason) {
  return make_verdict("exhausted", system, DimStatus::Unknown, -1, {{"reason", reason}});
}

nlohmann::json steps_json(const std::vector<HhStep>& steps) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : steps) {
    auto j = to_json(s.curve);
    j["multiplicity"] = s.multiplicity;
    out.push_back(std::move(j));
  }
  return out;
}

Int lower_bound_ell0(const DegenerationSplit& s) {
  Int eP = expected_dim(s.L_P), eF = expected_dim(s.L_F);
  Int ehP = expected_dim(s.hatL_P), ehF = expected_dim(s.hatL_F);
  // The limit dimension is the larger of the two branch formulas, each
  // nondecreasing in the four dimensions.
  return std::max(ehP + ehF + 1, eP + eF - s.d + s.k);
}

}  // namespace

Prover::Outcome Prover::solve(const LinearSystem& system, Context& ctx, int depth) {
  LinearSystem L = system.normalized();
  std::string key = L.to_string();
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return {it->second, false};
  }
  if (std::find(ctx.stack.begin(), ctx.stack.end(), key) != ctx.stack.end()) {
    return {unknown(L, "cycle"), true};
  }
  if (depth > options_.max_depth) return {unknown(L, "depth limit"), true};
  if (ctx.nodes >= options_.max_nodes) return {unknown(L, "node budget"), true};
  ++ctx.nodes;
  ctx.stack.push_back(key);
  Outcome out = solve_uncached(L, ctx, depth);
  ctx.stack.pop_back();
  if (out.verdict.decisive() || !out.limited) {
    std::lock_guard lock(mutex_);
    memo_[key] = out.verdict;
  }
  return out;
}

Prover::Outcome Prover::solve_uncached(const LinearSystem& L, Context& ctx, int depth) {
  const Int d = L.degree();
  const auto mults = L.mults();
  if (std::any_of(mults.begin(), mults.end(), [d](Int m) { return m > d; })) {
    return {make_verdict("mult_exceeds_degree", L, DimStatus::Empty, -1), false};
  }
  if (std::all_of(mults.begin(), mults.end(), [](Int m) { return m == 0; })) {
    return {make_verdict("no_conditions", L, DimStatus::Regular, virtual_dim(L)), false};
  }
  bool limited = false;

  // Negative (-1)-curves are fixed components, so removing them keeps the dimension.
  HhResult hh = hh_split(L, {HhMode::Conjecture, false});
  if (hh.empty_by_overlap) {
    // The overlap may only appear after earlier curves have been removed.
    nlohmann::json data = {{"steps", steps_json(hh.steps)},
                           {"curves", {to_json(hh.overlap->first), to_json(hh.overlap->second)}}};
    return {make_verdict("overlapping_curves", L, DimStatus::Empty, -1, data), false};
  }
  if (!hh.steps.empty()) {
    Outcome child = solve(hh.residual, ctx, depth + 1);
    limited |= child.limited;
    if (child.verdict.decisive()) {
      Int ell = child.verdict.ell;
      nlohmann::json data = {{"steps", steps_json(hh.steps)}, {"residual", hh.residual.to_string()}};
      return {make_verdict("fixed_curves", L, status_for(L, ell), ell, data, {child.verdict.trace}), false};
    }
  }

  Reduction red = standard_reduce(L);
  if (!red.transcript.empty()) {
    Outcome child = solve(red.result, ctx, depth + 1);
    limited |= child.limited;
    if (child.verdict.decisive()) {
      Int ell = child.verdict.ell;
      nlohmann::json moves = nlohmann::json::array();
      for (const auto& m : red.transcript) moves.push_back(to_json(m));
      return {make_verdict("cremona_reduce", L, status_for(L, ell), ell, {{"transcript", moves}},
                           {child.verdict.trace}),
              false};
    }
  } else if (!red.empty) {
    std::size_t points = 0;
    for (Int m : mults) points += m > 0 ? 1 : 0;
    if (points <= 9) {
      Int e = expected_dim(L);
      return {make_verdict("harbourne_standard", L, status_for(L, e), e, {{"points", points}}), false};
    }
  }

  if (L.is_quasi_homogeneous() && L.max_tail_multiplicity() <= 5) {
    HhResult low = hh_split(L, {HhMode::Conjecture, false});
    nlohmann::json data = {{"steps", steps_json(low.steps)}, {"residual", low.residual.to_string()}};
    return {make_verdict("low_multiplicity_qh", L, status_for(L, low.ell), low.ell, data), false};
  }

  if (options_.use_degeneration && L.is_quasi_homogeneous() && L.max_tail_multiplicity() <= 6) {
    bool deg_limited = false;
    if (auto v = try_degeneration(L, ctx, depth, deg_limited)) return {*v, false};
    limited |= deg_limited;
  }

  if (options_.use_oracle && monomial_count(d) <= options_.oracle_monomial_cap) {
    OracleResult res = dimension_char_p(L, options_.oracle);
    if (res.certified_regular) {
      nlohmann::json data = {{"prime", options_.oracle.prime}, {"seed", options_.oracle.seed},
                             {"trial", res.best_trial},      {"rank", res.rank},
                             {"rows", res.rows},             {"cols", res.cols}};
      return {make_verdict("oracle", L, status_for(L, res.ell), res.ell, data), false};
    }
  }
  return {unknown(L, limited ? "limits reached" : "no method applies"), limited};
}

std::optional<std::array<DimVerdict, 4>> Prover::split_verdicts(const DegenerationSplit& s, Context& ctx,
                                                                int depth, bool& limited) {
  std::array<const LinearSystem*, 4> systems{&s.L_P, &s.L_F, &s.hatL_P, &s.hatL_F};
  std::array<Int, 4> ell{expected_dim(s.L_P), expected_dim(s.L_F), expected_dim(s.hatL_P),
                         expected_dim(s.hatL_F)};
  const Int target = expected_dim(s.system);
  std::array<DimVerdict, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    Outcome o = solve(*systems[i], ctx, depth + 1);
    limited |= o.limited;
    if (!o.verdict.decisive()) return std::nullopt;
    out[i] = o.verdict;
    ell[i] = o.verdict.ell;
    // Remaining entries are still lower bounds; give up once the limit is too big.
    Int bound = std::max(ell[2] + ell[3] + 1, ell[0] + ell[1] - s.d + s.k);
    if (bound > target) return std::nullopt;
  }
  return out;
}

std::optional<DimVerdict> Prover::try_degeneration(const LinearSystem& L, Context& ctx, int depth,
                                                   bool& limited) {
  const Int target = expected_dim(L);
  for (Int k : {Int{5}, Int{6}}) {
    if (k >= L.degree()) continue;
    for (Int b : b_scan_order(L, k)) {
      DegenerationSplit s = degenerate(L, k, b);
      if (lower_bound_ell0(s) > target) continue;
      auto four = split_verdicts(s, ctx, depth, limited);
      if (!four) continue;
      Int ell0 = key_lemma_dim(s, (*four)[0].ell, (*four)[1].ell, (*four)[2].ell, (*four)[3].ell);
      if (ell0 != target) continue;
      std::string lemma = "key_lemma";
      bool all_nonspecial = (*four)[0].non_special() && (*four)[1].non_special();
      if (target == -1 && all_nonspecial && (*four)[2].ell == -1 && (*four)[3].ell == -1 &&
          s.hat_v_P <= virtual_dim(L)) {
        lemma = "empty";
      } else if (virtual_dim(L) >= 0 && all_nonspecial && s.v_P >= -1 && s.v_F >= -1 &&
                 virtual_dim(L) - 1 >= (*four)[2].ell + (*four)[3].ell) {
        lemma = "nonspecial";
      }
      nlohmann::json data = {{"k", k}, {"b", b}, {"ell0", ell0}, {"lemma", lemma}};
      std::vector<TracePtr> kids;
      for (const auto& v : *four) kids.push_back(v.trace);
      return make_verdict("degeneration", L, status_for(L, ell0), ell0, data, std::move(kids));
    }
  }
  return std::nullopt;
}

bool Prover::prove_empty(const LinearSystem& system, Int k, Int b) {
  LinearSystem L = system.normalized();
  if (virtual_dim(L) > -1) throw std::invalid_argument("prove_empty needs v(L) <= -1");
  auto n = static_cast<Int>(L.tail_points());
  if (!L.is_quasi_homogeneous() || k < 1 || k >= L.degree() || b < 0 || b >= n) return false;
  DegenerationSplit s = degenerate(L, k, b);
  Context ctx;
  bool limited = false;
  std::array<DimVerdict, 4> four;
  std::array<const LinearSystem*, 4> systems{&s.L_P, &s.L_F, &s.hatL_P, &s.hatL_F};
  for (std::size_t i = 0; i < 4; ++i) {
    four[i] = solve(*systems[i], ctx, 1).verdict;
    if (!four[i].decisive()) return false;
  }
  (void)limited;
  if (!four[0].non_special() || !four[1].non_special()) return false;
  if (four[2].ell != -1 || four[3].ell != -1 || s.hat_v_P > virtual_dim(L)) return false;
  return key_lemma_dim(s, four[0].ell, four[1].ell, four[2].ell, four[3].ell) == -1;
}

bool Prover::prove_nonspecial(const LinearSystem& system, Int k, Int b) {
  LinearSystem L = system.normalized();
  const Int v = virtual_dim(L);
  if (v < -1) throw std::invalid_argument("prove_nonspecial needs v(L) >= -1");
  // v = -1 belongs to the emptiness lemma.
  if (v == -1) return false;
  auto n = static_cast<Int>(L.tail_points());
  if (!L.is_quasi_homogeneous() || k < 1 || k >= L.degree() || b < 0 || b >= n) return false;
  DegenerationSplit s = degenerate(L, k, b);
  if (s.v_P < -1 || s.v_F < -1) return false;
  Context ctx;
  std::array<DimVerdict, 4> four;
  std::array<const LinearSystem*, 4> systems{&s.L_P, &s.L_F, &s.hatL_P, &s.hatL_F};
  for (std::size_t i = 0; i < 4; ++i) {
    four[i] = solve(*systems[i], ctx, 1).verdict;
    if (!four[i].decisive()) return false;
  }
  if (!four[0].non_special() || !four[1].non_special()) return false;
  if (v - 1 < four[2].ell + four[3].ell) return false;
  return key_lemma_dim(s, four[0].ell, four[1].ell, four[2].ell, four[3].ell) == v;
}

DimVerdict recursive_dim(const LinearSystem& system, const ProverOptions& options) {
  Prover prover(options);
  return prover.dimension(system);
}

bool prove_empty(const LinearSystem& system, Int k, Int b) {
  Prover prover;
  return prover.prove_empty(system, k, b);
}

bool prove_nonspecial(const LinearSystem& system, Int k, Int b) {
  Prover prover;
  return prover.prove_nonspecial(system, k, b);
}

// --- certificate replay ---------------------------------------------------------------

namespace {

class Replayer {
 public:
  explicit Replayer(const ReplayOptions& options) : options_(options) {}

  CertificateReport run(const TracePtr& root) {
    if (!root) {
      report_.ok = false;
      report_.failures.push_back("empty trace");
      return report_;
    }
    visit(root);
    report_.ok = report_.failures.empty();
    return report_;
  }

 private:
  void visit(const TracePtr& node) {
    if (!seen_.insert(node.get()).second) return;
    ++report_.nodes_checked;
    for (const auto& c : node->children) visit(c);
    try {
      check(*node);
    } catch (const std::exception& ex) {
      fail(*node, ex.what());
    }
  }

  void fail(const TraceNode& node, const std::string& why) {
    report_.failures.push_back(node.method + " at " + node.system.to_string() + ": " + why);
  }

  static void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
  }

  static void require_child_count(const TraceNode& node, std::size_t n) {
    require(node.children.size() == n, "expected " + std::to_string(n) + " children");
    for (const auto& c : node.children) require(c->status != DimStatus::Unknown, "child is undecided");
  }

  /// Replays recorded curve removals and returns the residual.
  static LinearSystem replay_steps(const LinearSystem& start, const nlohmann::json& steps) {
    DivisorClass cur = start.as_class();
    for (const auto& step : steps) {
      Placement p = placement_from_json(step, cur.slot_count());
      Int n = step.at("multiplicity").get<Int>();
      require(n >= 1, "split multiplicity must be positive");
      for (const auto& part : p.entry.constituents(p.slots, cur.slot_count())) {
        require(is_minus_one_class(part), part.to_string() + " is not a (-1)-class");
        require(intersect(cur, part) == -n, "intersection with " + part.to_string() + " is not -" +
                                                std::to_string(n));
      }
      cur -= n * p.cls;
      require(cur.is_effective_shape(), "split leaves a negative coefficient");
    }
    return cur.as_system();
  }

  void check(const TraceNode& node) {
    const LinearSystem& L = node.system;
    const Int e = expected_dim(L);
    if (node.status == DimStatus::Unknown) return;
    require(node.status == status_for(L, node.ell), "status does not match ell");
    const std::string& m = node.method;
    if (m == "mult_exceeds_degree") {
      require(std::any_of(L.mults().begin(), L.mults().end(), [&](Int x) { return x > L.degree(); }),
              "no multiplicity exceeds the degree");
      require(node.ell == -1, "ell must be -1");
    } else if (m == "no_conditions") {
      require(std::all_of(L.mults().begin(), L.mults().end(), [](Int x) { return x == 0; }),
              "system has conditions");
      require(node.ell == virtual_dim(L), "ell must equal v");
    } else if (m == "overlapping_curves") {
      const auto& curves = node.data.at("curves");
      require(curves.size() == 2, "need two curves");
      LinearSystem at = replay_steps(L, node.data.value("steps", nlohmann::json::array()));
      Placement a = placement_from_json(curves[0], L.slot_count());
      Placement b = placement_from_json(curves[1], L.slot_count());
      for (const Placement* p : {&a, &b}) {
        require(p->entry.kind() == CurveKind::Simple && is_minus_one_class(p->cls), "not a (-1)-curve");
        require(intersect(at.as_class(), p->cls) < 0, "curve does not meet the system negatively");
      }
      require(intersect(a.cls, b.cls) > 0, "curves do not meet");
      require(node.ell == -1, "ell must be -1");
    } else if (m == "fixed_curves") {
      require_child_count(node, 1);
      LinearSystem residual = replay_steps(L, node.data.at("steps"));
      require(residual.normalized() == node.children[0]->system, "residual does not match child");
      require(node.ell == node.children[0]->ell, "ell differs from the residual");
    } else if (m == "cremona_reduce") {
      require_child_count(node, 1);
      LinearSystem cur = L;
      for (const auto& mv : node.data.at("transcript")) cur = apply_move(cur, move_from_json(mv));
      require(cur.normalized() == node.children[0]->system, "reduced system does not match child");
      require(node.ell == node.children[0]->ell, "ell differs from the reduced system");
    } else if (m == "harbourne_standard") {
      std::size_t points = 0;
      for (Int x : L.mults()) points += x > 0 ? 1 : 0;
      require(points <= 9, "more than nine points");
      require(is_standard_form(L), "not in standard form");
      require(node.ell == e, "ell must be the expected dimension");
    } else if (m == "low_multiplicity_qh") {
      require(L.is_quasi_homogeneous() && L.max_tail_multiplicity() <= 5, "not quasi-homogeneous of multiplicity <= 5");
      LinearSystem residual = replay_steps(L, node.data.at("steps"));
      require(node.ell == std::max<Int>(-1, virtual_dim(residual)), "ell must be the residual's expected dimension");
    } else if (m == "degeneration") {
      require_child_count(node, 4);
      DegenerationSplit s = degenerate(L, node.data.at("k").get<Int>(), node.data.at("b").get<Int>());
      std::array<const LinearSystem*, 4> systems{&s.L_P, &s.L_F, &s.hatL_P, &s.hatL_F};
      for (std::size_t i = 0; i < 4; ++i) {
        require(systems[i]->normalized() == node.children[i]->system, "child system mismatch");
      }
      Int ell0 = key_lemma_dim(s, node.children[0]->ell, node.children[1]->ell, node.children[2]->ell,
                               node.children[3]->ell);
      require(ell0 == e, "limit dimension is not the expected dimension");
      require(node.ell == e, "ell must be the expected dimension");
    } else if (m == "oracle") {
      require(node.ell == e, "oracle nodes certify the expected dimension only");
      require(node.data.at("rank").get<Int>() == monomial_count(L.degree()) - 1 - e,
              "recorded rank does not give the expected dimension");
      if (options_.recheck_oracle) {
        OracleOptions o;
        o.prime = node.data.at("prime").get<std::uint32_t>();
        o.seed = node.data.at("seed").get<std::uint64_t>();
        o.kernel = options_.kernel;
        require(trial_dimension(L, o, node.data.at("trial").get<int>()) == e, "oracle trial does not reach e");
      }
    } else {
      throw std::runtime_error("unknown method");
    }
  }

  ReplayOptions options_;
  CertificateReport report_;
  std::set<const TraceNode*> seen_;
};

}  // namespace

CertificateReport check_certificate(const TracePtr& root, const ReplayOptions& options) {
  return Replayer(options).run(root);
}

nlohmann::json to_json(const DegenerationSplit& s) {
  return {{"system", s.system.to_string()}, {"k", s.k},
          {"b", s.b},                       {"L_P", s.L_P.to_string()},
          {"L_F", s.L_F.to_string()},       {"hatL_P", s.hatL_P.to_string()},
          {"hatL_F", s.hatL_F.to_string()}, {"v_P", s.v_P},
          {"v_F", s.v_F},                   {"hat_v_P", s.hat_v_P},
          {"hat_v_F", s.hat_v_F}};
}

nlohmann::json to_json(const DimVerdict& v, bool with_trace) {
  nlohmann::json out = {{"status", to_string(v.status)}};
  if (v.decisive()) out["ell"] = v.ell;
  else out["ell"] = nullptr;
  if (v.trace) {
    out["system"] = v.trace->system.to_string();
    out["method"] = v.trace->method;
    if (with_trace) out["trace"] = trace_to_json(v.trace);
  }
  return out;
}

}  // namespace linsys
