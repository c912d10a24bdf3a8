#include <algorithm>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "linsys/cremona.hpp"
#include "linsys/neg_curves.hpp"
#include "linsys/oracle.hpp"
#include "support.hpp"

using namespace linsys;
using testing::L;

TEST_SUITE("cremona") {
  TEST_CASE("quadratic transformation formula") {
    CHECK(cremona(L("L(20,12,6^4)"), 0, 1, 2).normalized() == L("L(16,8,6^2,2^2)"));
    CHECK(cremona(L("L(14,5,6^5)"), 1, 2, 3) == L("L(10,5,2^3,6^2)"));
    try {
      cremona(L("L(10,2,6^3)"), 1, 2, 3);
      FAIL("expected NegativeEntry");
    } catch (const CremonaError& e) {
      CHECK(e.kind() == CremonaError::Kind::NegativeEntry);
    }
    CHECK_THROWS_AS(cremona(L("L(10,2,6^3)"), 1, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(split_fixed_line(L("L(0,1,1)"), 0, 1), CremonaError);
    CHECK_THROWS_AS(cremona(L("L(10,2,6^3)"), 1, 2, 7), std::out_of_range);
  }

  TEST_CASE("fixed line splitting") {
    CHECK(split_fixed_line(L("L(11,6,6,3^2)"), 0, 1) == L("L(10,5,5,3^2)"));
    CHECK(split_fixed_line(L("L(10,8,6,6)"), 0, 1) == L("L(9,7,5,6)"));
    try {
      split_fixed_line(L("L(5,2,2)"), 0, 1);
      FAIL("expected NotFixed");
    } catch (const CremonaError& e) {
      CHECK(e.kind() == CremonaError::Kind::NotFixed);
    }
  }

  TEST_CASE("standard form reduction") {
    Reduction r = standard_reduce(L("L(10,8,6^2)"));
    CHECK(r.result.normalized() == L("L(0)").normalized());
    CHECK(expected_dim(r.result) == 0);
    CHECK(hh_split(L("L(10,8,6^2)")).ell == 0);
    LinearSystem cur = L("L(10,8,6^2)");
    for (const auto& m : r.transcript) cur = apply_move(cur, m);
    CHECK(cur == r.result);

    Reduction same = standard_reduce(L("L(7,0,2^5)"));
    CHECK(same.transcript.empty());
    CHECK(same.result == L("L(7,0,2^5)"));
    CHECK(is_standard_form(same.result));

    CHECK(standard_reduce(L("L(6,6,6)")).result.normalized() == L("L(0,0)"));
    CHECK(standard_reduce(L("L(3,4)")).empty);
  }

  TEST_CASE("transcripts serialize and replay") {
    Reduction r = standard_reduce(L("L(20,12,6^4)"));
    REQUIRE_FALSE(r.transcript.empty());
    std::string jsonl = transcript_jsonl(r.transcript);
    std::istringstream in(jsonl);
    std::string line;
    LinearSystem cur = L("L(20,12,6^4)");
    std::size_t count = 0;
    while (std::getline(in, line)) {
      Move m = move_from_json(nlohmann::json::parse(line));
      cur = apply_move(cur, m);
      ++count;
    }
    CHECK(count == r.transcript.size());
    CHECK(cur == r.result);
    Move bad = r.transcript.front();
    bad.after = L("L(1)");
    CHECK_THROWS(apply_move(L("L(20,12,6^4)"), bad));
  }

  TEST_CASE("invariance properties") {
    std::mt19937_64 rng(2024);
    int applied = 0;
    while (applied < 1000) {
      LinearSystem sys = testing::random_system(rng, 30, 8, 12);
      if (sys.slot_count() < 3) continue;
      std::vector<std::size_t> slots(sys.slot_count());
      std::iota(slots.begin(), slots.end(), std::size_t{0});
      std::shuffle(slots.begin(), slots.end(), rng);
      std::size_t i = slots[0], j = slots[1], k = slots[2];
      LinearSystem t;
      try {
        t = cremona(sys, i, j, k);
      } catch (const CremonaError&) {
        continue;
      }
      ++applied;
      CHECK(virtual_dim(t) == virtual_dim(sys));
      CHECK(cremona(t, i, j, k) == sys);
      auto other = testing::random_system(rng, 30, 8, 12).as_class().padded(sys.slot_count());
      if (other.slot_count() == sys.slot_count()) {
        CHECK(intersect(cremona(other, i, j, k), t.as_class()) == intersect(other, sys.as_class()));
      }
    }
  }

  TEST_CASE("line splitting changes v by mi + mj - d - 1") {
    std::mt19937_64 rng(99);
    int tested = 0;
    while (tested < 500) {
      LinearSystem sys = testing::random_system(rng, 20, 6, 12);
      if (sys.slot_count() < 2) continue;
      std::size_t i = 0, j = 1 + static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<Int>(sys.slot_count()) - 2));
      Int excess = sys.degree() - sys.mult(i) - sys.mult(j);
      if (excess >= 0) continue;
      if (sys.degree() == 0 || sys.mult(i) == 0 || sys.mult(j) == 0) {
        CHECK_THROWS_AS(split_fixed_line(sys, i, j), CremonaError);
        continue;
      }
      ++tested;
      LinearSystem s = split_fixed_line(sys, i, j);
      Int delta = virtual_dim(s) - virtual_dim(sys);
      CHECK(delta == sys.mult(i) + sys.mult(j) - sys.degree() - 1);
      CHECK(delta >= 0);
    }
  }
}
