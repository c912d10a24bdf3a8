#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "linsys/linear_system.hpp"

namespace testing {

inline std::string golden(const std::string& name) {
  std::ifstream in(std::string(LINSYS_GOLDEN_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline linsys::LinearSystem L(const char* text) { return linsys::LinearSystem::parse(text); }

inline linsys::Int uniform(std::mt19937_64& rng, linsys::Int lo, linsys::Int hi) {
  return std::uniform_int_distribution<linsys::Int>(lo, hi)(rng);
}

/// Random system with degree <= max_d, up to max_points tail points of
/// multiplicity <= max_m each.
inline linsys::LinearSystem random_system(std::mt19937_64& rng, linsys::Int max_d, std::size_t max_points,
                                          linsys::Int max_m) {
  linsys::Int d = uniform(rng, 0, max_d);
  std::vector<linsys::Int> mults{uniform(rng, 0, std::min(d, max_m))};
  auto n = static_cast<std::size_t>(uniform(rng, 0, static_cast<linsys::Int>(max_points)));
  for (std::size_t i = 0; i < n; ++i) mults.push_back(uniform(rng, 0, max_m));
  return linsys::LinearSystem(d, std::move(mults));
}

inline linsys::LinearSystem random_qh(std::mt19937_64& rng, linsys::Int max_d, std::size_t max_n) {
  linsys::Int d = uniform(rng, 0, max_d);
  return linsys::LinearSystem::quasi_homogeneous(d, uniform(rng, 0, d), 6,
                                                 static_cast<std::size_t>(uniform(rng, 0, static_cast<linsys::Int>(max_n))));
}

}  // namespace testing
