#pragma once

// Dimension of a linear system from the rank of its interpolation matrix
// over F_p at pseudo-random points. Maximal rank at any point set proves
// the generic system non-special; a rank deficit proves nothing.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "json.hpp"
#include "linsys/kernels.hpp"
#include "linsys/linear_system.hpp"

namespace linsys {

inline constexpr std::uint32_t kDefaultPrime = 32003;

/// Dense row-major matrix with entries in [0, p).
struct PrimeFieldMatrix {
  std::uint32_t prime = kDefaultPrime;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> data;

  std::uint32_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::uint32_t* row(std::size_t r) { return data.data() + r * cols; }
};

using AffinePoint = std::pair<std::uint32_t, std::uint32_t>;

bool is_prime(std::uint64_t n) noexcept;
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

/// Exponent pairs (i, j) of x^i y^j with i + j <= d in graded-lex order:
/// by total degree, then by descending power of x.
std::vector<std::pair<Int, Int>> monomial_basis(Int degree);

/// One row per condition d^a/dx^a d^b/dy^b (a + b < mi) at each point with
/// nonzero multiplicity, in slot order. `points` pairs with those slots.
PrimeFieldMatrix build_matrix(const LinearSystem& system, const std::vector<AffinePoint>& points,
                              std::uint32_t prime = kDefaultPrime);

/// Rank by in-place Gaussian elimination; the first nonzero entry in each
/// column is the pivot.
std::size_t rank_ff(PrimeFieldMatrix matrix, kernels::Kernel kernel = kernels::Kernel::Auto);

struct OracleOptions {
  std::uint32_t prime = kDefaultPrime;
  std::uint64_t seed = 42;
  int trials = 3;
  kernels::Kernel kernel = kernels::Kernel::Auto;
};

struct OracleResult {
  Int ell = -1;            ///< minimum over the trials run
  std::size_t rank = 0;    ///< rank at the minimizing trial
  std::size_t rows = 0;
  std::size_t cols = 0;
  int best_trial = 0;
  std::vector<Int> trial_ell;
  /// The minimum reached the expected dimension.
  bool certified_regular = false;
};

/// Distinct points for the nonzero multiplicities of `system`, drawn for
/// trial `trial` of a run seeded with `seed`.
std::vector<AffinePoint> sample_points(const LinearSystem& system, std::uint64_t seed, int trial,
                                       std::uint32_t prime);

/// Runs up to `trials` trials, stopping early once the expected dimension
/// is reached. Throws std::invalid_argument when the prime is unusable.
OracleResult dimension_char_p(const LinearSystem& system, const OracleOptions& options = {});
/// Dimension at a single trial.
Int trial_dimension(const LinearSystem& system, const OracleOptions& options, int trial);
bool certify_regular(const LinearSystem& system, const OracleOptions& options = {});

void validate_prime(const LinearSystem& system, std::uint32_t prime);

nlohmann::json to_json(const OracleResult& result);

}  // namespace linsys
