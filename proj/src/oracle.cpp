#include "linsys/oracle.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace linsys {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw std::domain_error("zero has no inverse");
  std::uint64_t result = 1, base = a % p, e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

std::vector<std::pair<Int, Int>> monomial_basis(Int degree) {
  std::vector<std::pair<Int, Int>> out;
  out.reserve(static_cast<std::size_t>(monomial_count(degree)));
  for (Int t = 0; t <= degree; ++t) {
    for (Int i = t; i >= 0; --i) out.emplace_back(i, t - i);
  }
  return out;
}

void validate_prime(const LinearSystem& system, std::uint32_t prime) {
  if (!is_prime(prime)) throw std::invalid_argument(std::to_string(prime) + " is not prime");
  if (prime >= (1u << 31)) throw std::invalid_argument("prime must be below 2^31");
  if (prime <= 720) throw std::invalid_argument("prime must exceed 720 so that 6! is invertible");
  if (static_cast<Int>(prime) <= system.degree()) {
    throw std::invalid_argument("prime must exceed the degree " + std::to_string(system.degree()));
  }
  if (static_cast<Int>(prime) <= system.max_tail_multiplicity() || static_cast<Int>(prime) <= system.m0()) {
    throw std::invalid_argument("prime must exceed every multiplicity");
  }
}

namespace {

std::uint32_t pow_mod(std::uint64_t base, Int e, std::uint32_t p) {
  std::uint64_t r = 1;
  base %= p;
  while (e > 0) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

/// i (i-1) ... (i-a+1) mod p.
std::uint64_t falling(Int i, Int a, std::uint32_t p) {
  std::uint64_t r = 1;
  for (Int t = 0; t < a; ++t) r = r * static_cast<std::uint64_t>(i - t) % p;
  return r;
}

}  // namespace

PrimeFieldMatrix build_matrix(const LinearSystem& system, const std::vector<AffinePoint>& points,
                              std::uint32_t prime) {
  validate_prime(system, prime);
  std::vector<Int> mults;
  for (Int m : system.mults()) {
    if (m > 0) mults.push_back(m);
  }
  if (mults.size() != points.size()) {
    throw std::invalid_argument("need one point per nonzero multiplicity");
  }
  std::set<AffinePoint> seen;
  for (const auto& pt : points) {
    if (pt.first >= prime || pt.second >= prime) throw std::invalid_argument("point not reduced mod p");
    if (!seen.insert(pt).second) throw std::invalid_argument("duplicate points");
  }

  const Int d = system.degree();
  const auto basis = monomial_basis(d);
  PrimeFieldMatrix mat;
  mat.prime = prime;
  mat.cols = basis.size();
  mat.rows = static_cast<std::size_t>(condition_count(system));
  mat.data.assign(mat.rows * mat.cols, 0);

  std::vector<std::uint32_t> xpow(static_cast<std::size_t>(d) + 1), ypow(static_cast<std::size_t>(d) + 1);
  std::size_t r = 0;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    auto [x, y] = points[pi];
    for (Int e = 0; e <= d; ++e) {
      xpow[static_cast<std::size_t>(e)] = pow_mod(x, e, prime);
      ypow[static_cast<std::size_t>(e)] = pow_mod(y, e, prime);
    }
    for (Int order = 0; order < mults[pi]; ++order) {
      for (Int a = order; a >= 0; --a) {
        Int b = order - a;
        std::uint32_t* row = mat.row(r++);
        for (std::size_t c = 0; c < basis.size(); ++c) {
          auto [i, j] = basis[c];
          if (i < a || j < b) continue;
          std::uint64_t v = falling(i, a, prime) * falling(j, b, prime) % prime;
          v = v * xpow[static_cast<std::size_t>(i - a)] % prime;
          v = v * ypow[static_cast<std::size_t>(j - b)] % prime;
          row[c] = static_cast<std::uint32_t>(v);
        }
      }
    }
  }
  return mat;
}

std::size_t rank_ff(PrimeFieldMatrix m, kernels::Kernel kernel) {
  const std::uint32_t p = m.prime;
  const kernels::Kernel k = kernels::resolve(kernel, p);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols && rank < m.rows; ++c) {
    std::size_t piv = rank;
    while (piv < m.rows && m.at(piv, c) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != rank) {
      std::swap_ranges(m.row(piv) + c, m.row(piv) + m.cols, m.row(rank) + c);
    }
    std::uint32_t* prow = m.row(rank);
    const std::uint64_t inv = inverse_mod(prow[c], p);
    for (std::size_t t = c; t < m.cols; ++t) prow[t] = static_cast<std::uint32_t>(prow[t] * inv % p);
    for (std::size_t r = rank + 1; r < m.rows; ++r) {
      std::uint32_t f = m.at(r, c);
      if (f == 0) continue;
      kernels::axpy_mod(k, m.row(r) + c, prow + c, p - f, m.cols - c, p);
    }
    ++rank;
  }
  return rank;
}

std::vector<AffinePoint> sample_points(const LinearSystem& system, std::uint64_t seed, int trial,
                                       std::uint32_t prime) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::size_t count = 0;
  for (Int m : system.mults()) count += m > 0 ? 1 : 0;
  std::vector<AffinePoint> pts;
  std::set<AffinePoint> seen;
  while (pts.size() < count) {
    AffinePoint pt{static_cast<std::uint32_t>(1 + rng() % (prime - 1)),
                   static_cast<std::uint32_t>(1 + rng() % (prime - 1))};
    if (seen.insert(pt).second) pts.push_back(pt);
  }
  return pts;
}

Int trial_dimension(const LinearSystem& system, const OracleOptions& options, int trial) {
  auto pts = sample_points(system, options.seed, trial, options.prime);
  PrimeFieldMatrix mat = build_matrix(system, pts, options.prime);
  Int cols = static_cast<Int>(mat.cols);
  return cols - 1 - static_cast<Int>(rank_ff(std::move(mat), options.kernel));
}

OracleResult dimension_char_p(const LinearSystem& system, const OracleOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("trials must be at least 1");
  validate_prime(system, options.prime);
  OracleResult out;
  out.cols = static_cast<std::size_t>(monomial_count(system.degree()));
  out.rows = static_cast<std::size_t>(condition_count(system));
  const Int e = expected_dim(system);
  for (int t = 0; t < options.trials; ++t) {
    Int ell = trial_dimension(system, options, t);
    out.trial_ell.push_back(ell);
    if (t == 0 || ell < out.ell) {
      out.ell = ell;
      out.best_trial = t;
    }
    if (out.ell == e) break;
  }
  out.rank = static_cast<std::size_t>(static_cast<Int>(out.cols) - 1 - out.ell);
  out.certified_regular = out.ell == e;
  return out;
}

bool certify_regular(const LinearSystem& system, const OracleOptions& options) {
  return dimension_char_p(system, options).certified_regular;
}

nlohmann::json to_json(const OracleResult& r) {
  return {{"ell", r.ell},
          {"rank", r.rank},
          {"rows", r.rows},
          {"cols", r.cols},
          {"best_trial", r.best_trial},
          {"trial_ell", r.trial_ell},
          {"certified_regular", r.certified_regular}};
}

}  // namespace linsys
