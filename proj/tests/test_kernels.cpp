#include <random>
#include <vector>

#include "doctest.h"
#include "linsys/kernels.hpp"
#include "linsys/oracle.hpp"
#include "support.hpp"

using namespace linsys;
using namespace linsys::kernels;

TEST_SUITE("kernels") {
  TEST_CASE("scalar reference") {
    std::vector<std::uint32_t> dst{1, 2, 3}, src{4, 5, 6};
    axpy_mod_scalar(dst.data(), src.data(), 3, dst.size(), 7);
    CHECK(dst == std::vector<std::uint32_t>{6, 3, 0});
  }

  TEST_CASE("dispatch") {
    CHECK(resolve(Kernel::Scalar, kDefaultPrime) == Kernel::Scalar);
    CHECK(resolve(Kernel::Avx2, 2147483647u) == Kernel::Scalar);
    Kernel a = resolve(Kernel::Auto, kDefaultPrime);
    CHECK(a == (avx2_available() ? Kernel::Avx2 : Kernel::Scalar));
    CHECK(parse_kernel("scalar") == Kernel::Scalar);
    CHECK(to_string(Kernel::Avx2) == "avx2");
    CHECK_THROWS(parse_kernel("neon"));
  }

  TEST_CASE("AVX2 matches scalar on random rows") {
    if (!avx2_available()) {
      MESSAGE("AVX2 not available; equivalence test skipped");
      return;
    }
    std::mt19937_64 rng(3);
    for (std::uint32_t p : {3u, 7919u, 32003u, 65521u}) {
      std::uniform_int_distribution<std::uint32_t> val(0, p - 1);
      for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u, 64u, 1000u}) {
        std::vector<std::uint32_t> a(n), b(n), src(n);
        for (std::size_t i = 0; i < n; ++i) {
          a[i] = b[i] = val(rng);
          src[i] = val(rng);
        }
        for (std::uint32_t s : {0u, 1u, p - 1, val(rng)}) {
          axpy_mod_scalar(a.data(), src.data(), s, n, p);
          axpy_mod_avx2(b.data(), src.data(), s, n, p);
          CHECK(a == b);
        }
      }
    }
  }

  TEST_CASE("rank agrees across kernels") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 30; ++i) {
      auto sys = testing::random_system(rng, 20, 8, 6);
      auto pts = sample_points(sys, 42, 0, kDefaultPrime);
      auto m = build_matrix(sys, pts);
      CHECK(rank_ff(m, Kernel::Scalar) == rank_ff(m, Kernel::Avx2));
    }
  }
}
