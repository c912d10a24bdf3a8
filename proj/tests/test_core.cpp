#include "doctest.h"
#include "support.hpp"

using namespace linsys;
using testing::L;

TEST_SUITE("core") {
  TEST_CASE("virtual and expected dimension") {
    CHECK(virtual_dim(L("L(10,2,6^3)")) == -1);
    CHECK(virtual_dim(L("L(0)")) == 0);
    CHECK(virtual_dim(L("L(24,16,6^9)")) == -1);
    CHECK(expected_dim(L("L(10,8,6^2)")) == -1);
    CHECK(virtual_dim(L("L(10,8,6^2)")) == -13);
    CHECK(expected_dim(L("L(14,0,6^5)")) == 14);
    CHECK(expected_dim(L("L(2,0,1^5)")) == 0);
  }

  TEST_CASE("intersection, canonical class and genus") {
    CHECK(intersect(L("L(10,8,6,6)").as_class(), L("L(1,0,1,1)").as_class()) == -2);
    auto conic = L("L(2,0,1^5)").as_class();
    CHECK(intersect(conic, conic) == -1);
    auto dodecic = L("L(12,8,3^9)").as_class();
    CHECK(intersect(dodecic, dodecic) == -1);
    CHECK(canonical_intersect(conic) == -1);
    CHECK(canonical_intersect(L("L(6,3,2^7)").as_class()) == -1);
    CHECK(canonical_intersect(L("L(0)").as_class()) == 0);
    CHECK(arithmetic_genus(conic) == 0);
    CHECK(arithmetic_genus(L("L(3,0)").as_class()) == 1);
    CHECK(arithmetic_genus(L("L(1,0)").as_class()) == 0);
  }

  TEST_CASE("text form round-trips") {
    for (const char* s : {"L(22,7,6^12)", "L(0)", "L(10,5,2^3,6^2)", "L(1,1,1)", "L(7,0,0^3,1)"}) {
      CHECK(L(s).to_string() == s);
    }
    CHECK(L(" L( 22 , 7 , 6 ^ 12 ) ").to_string() == "L(22,7,6^12)");
    CHECK(L("L(10,5,2^3,6^2)").normalized().to_string() == "L(10,5,6^2,2^3)");
    CHECK(L("L(5)").m0() == 0);
  }

  TEST_CASE("parse errors carry the position") {
    try {
      L("L(10,2,6^x)");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 9);
      CHECK(e.caret().find('^') != std::string::npos);
    }
    CHECK_THROWS_AS(L("L(10,-2)"), ParseError);
    CHECK_THROWS_AS(L("M(1)"), ParseError);
    CHECK_THROWS_AS(L("L(1,2"), ParseError);
    CHECK_THROWS_AS(L("L()"), ParseError);
  }

  TEST_CASE("quasi-homogeneous predicate") {
    CHECK(L("L(22,7,6^12)").is_quasi_homogeneous());
    CHECK(L("L(10,3)").is_quasi_homogeneous());
    CHECK_FALSE(L("L(10,5,6^2,2^3)").is_quasi_homogeneous());
    CHECK(L("L(10,5,6,0,6)").is_quasi_homogeneous());
  }

  TEST_CASE("random properties") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
      LinearSystem sys = testing::random_system(rng, 40, 12, 8);
      DivisorClass D = sys.as_class();
      Int v = virtual_dim(sys);
      CHECK(expected_dim(sys) >= -1);
      CHECK(expected_dim(sys) >= v);
      CHECK((expected_dim(sys) == v) == (v >= -1));
      // v = D.(D-K)/2 and v = D^2 - g + 1.
      CHECK(2 * v == intersect(D, D) - canonical_intersect(D));
      CHECK(v == intersect(D, D) - arithmetic_genus(D) + 1);
      // Appending a zero point changes nothing.
      LinearSystem padded = sys.with_point(0);
      DivisorClass P = padded.as_class();
      CHECK(virtual_dim(padded) == v);
      CHECK(expected_dim(padded) == expected_dim(sys));
      CHECK(intersect(P, P) == intersect(D, D));
      CHECK(canonical_intersect(P) == canonical_intersect(D));
      CHECK(arithmetic_genus(P) == arithmetic_genus(D));
      CHECK(LinearSystem::parse(sys.to_string()) == sys);
    }
  }

  TEST_CASE("intersection form is symmetric and bilinear") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
      auto a = testing::random_system(rng, 20, 6, 6).as_class();
      auto b = testing::random_system(rng, 20, 6, 6).as_class();
      auto c = testing::random_system(rng, 20, 6, 6).as_class();
      Int k = testing::uniform(rng, -5, 5);
      CHECK(intersect(a, b) == intersect(b, a));
      CHECK(intersect(a + b, c) == intersect(a, c) + intersect(b, c));
      CHECK(intersect(k * a, b) == k * intersect(a, b));
    }
  }

  TEST_CASE("monomial and condition counts") {
    CHECK(monomial_count(22) == 276);
    CHECK(condition_count(L("L(22,7,6^12)")) == 280);
    CHECK(monomial_count(0) == 1);
  }

  TEST_CASE("overflow is detected") {
    CHECK_THROWS(checked::mul(Int{1} << 62, 4));
    CHECK(checked::add(2, 3) == 5);
  }
}
