#pragma once

// (k,b)-degenerations of the plane, the limit-dimension combiner, and the
// recursive prover that certifies dimensions with replayable traces.

#include <array>
#include <atomic>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "linsys/linear_system.hpp"
#include "linsys/oracle.hpp"
#include "linsys/verdict.hpp"

namespace linsys {

/// Restrictions of the limit of L(d, m0, m^n) to the two components.
struct DegenerationSplit {
  Int d = 0;
  Int k = 0;
  Int b = 0;
  LinearSystem system;
  LinearSystem L_P;     ///< L(d-k, m0, m^{n-b})
  LinearSystem L_F;     ///< L(d, d-k, m^b)
  LinearSystem hatL_P;  ///< L(d-k-1, m0, m^{n-b})
  LinearSystem hatL_F;  ///< L(d, d-k+1, m^b)
  Int v_P = 0, v_F = 0, hat_v_P = 0, hat_v_F = 0;
};

/// Requires a quasi-homogeneous system, 1 <= k < d and 0 <= b <= n.
DegenerationSplit degenerate(const LinearSystem& system, Int k, Int b);

/// Dimension of the limit system from the four restricted dimensions.
Int key_lemma_dim(const DegenerationSplit& split, Int ell_P, Int ell_F, Int ell_hat_P, Int ell_hat_F);

struct ProverOptions {
  /// Maximum recursion depth below the root.
  int max_depth = 8;
  /// Maximum number of expanded nodes per top-level call.
  std::size_t max_nodes = 200000;
  bool use_degeneration = true;
  bool use_oracle = true;
  /// Oracle runs only when (d+1)(d+2)/2 is at most this.
  Int oracle_monomial_cap = 5151;
  OracleOptions oracle;
};

/// Memoizing recursive prover. Safe to share between threads.
class Prover {
 public:
  explicit Prover(ProverOptions options = {});

  DimVerdict dimension(const LinearSystem& system);

  /// Lemma hypotheses for emptiness (v <= -1) checked on a (k,b) split.
  bool prove_empty(const LinearSystem& system, Int k, Int b);
  /// Lemma hypotheses for non-speciality (v >= 0) checked on a (k,b) split.
  bool prove_nonspecial(const LinearSystem& system, Int k, Int b);

  const ProverOptions& options() const noexcept { return options_; }
  std::size_t memo_size() const;

 private:
  struct Context;
  struct Outcome {
    DimVerdict verdict;
    /// Unknown only because of depth, node or cycle limits.
    bool limited = false;
  };

  Outcome solve(const LinearSystem& system, Context& ctx, int depth);
  Outcome solve_uncached(const LinearSystem& system, Context& ctx, int depth);
  std::optional<DimVerdict> try_degeneration(const LinearSystem& system, Context& ctx, int depth,
                                             bool& limited);
  std::optional<std::array<DimVerdict, 4>> split_verdicts(const DegenerationSplit& split, Context& ctx,
                                                          int depth, bool& limited);

  ProverOptions options_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, DimVerdict> memo_;
};

/// One-shot helpers with default options.
DimVerdict recursive_dim(const LinearSystem& system, const ProverOptions& options = {});
bool prove_empty(const LinearSystem& system, Int k, Int b);
bool prove_nonspecial(const LinearSystem& system, Int k, Int b);

/// Order in which the prover tries b for a given k.
std::vector<Int> b_scan_order(const LinearSystem& system, Int k);

struct CertificateReport {
  bool ok = true;
  std::size_t nodes_checked = 0;
  std::vector<std::string> failures;
};

struct ReplayOptions {
  /// Re-run the single recorded oracle trial at oracle nodes.
  bool recheck_oracle = true;
  kernels::Kernel kernel = kernels::Kernel::Auto;
};

/// Re-verifies every node of a trace with local arithmetic only.
CertificateReport check_certificate(const TracePtr& root, const ReplayOptions& options = {});

nlohmann::json to_json(const DegenerationSplit& split);
nlohmann::json to_json(const DimVerdict& verdict, bool with_trace);

}  // namespace linsys
