#include "doctest.h"
#include "linsys/degeneration.hpp"
#include "linsys/oracle.hpp"
#include "support.hpp"

using namespace linsys;
using testing::L;

namespace {

Int oracle_ell(const LinearSystem& s) { return dimension_char_p(s).ell; }

}  // namespace

TEST_SUITE("degeneration") {
  TEST_CASE("split formulas") {
    auto s = degenerate(L("L(141,100,6^50)"), 5, 13);
    CHECK(s.L_P == L("L(136,100,6^37)"));
    CHECK(s.L_F == L("L(141,136,6^13)"));
    CHECK(s.hatL_P == L("L(135,100,6^37)"));
    CHECK(s.hatL_F == L("L(141,137,6^13)"));

    auto t = degenerate(L("L(14,0,6^6)"), 5, 3);
    CHECK(t.L_P == L("L(9,0,6^3)"));
    CHECK(t.L_F == L("L(14,9,6^3)"));
    CHECK(t.hatL_P == L("L(8,0,6^3)"));
    CHECK(t.hatL_F == L("L(14,10,6^3)"));
    CHECK(t.v_P + t.hat_v_F == virtual_dim(L("L(14,0,6^6)")) - 1);

    CHECK_THROWS(degenerate(L("L(14,0,6^6)"), 0, 3));
    CHECK_THROWS(degenerate(L("L(14,0,6^6)"), 14, 3));
    CHECK_THROWS(degenerate(L("L(14,0,6^6)"), 5, 7));
    CHECK_THROWS(degenerate(L("L(14,0,6^2,5)"), 5, 1));
  }

  TEST_CASE("Key-Lemma combiner") {
    auto s = degenerate(L("L(14,0,6^6)"), 5, 3);
    CHECK(key_lemma_dim(s, 3, 3, -1, -1) == -1);
    // Honest value: L_P = L(9,0,6^3) is special, so this split gives 4.
    CHECK(key_lemma_dim(s, oracle_ell(s.L_P), oracle_ell(s.L_F), oracle_ell(s.hatL_P), oracle_ell(s.hatL_F)) == 4);
    // At the overlap r_P + r_F = d-k-1 the branches agree; otherwise inconsistent inputs throw.
    Int d = s.d, k = s.k;
    Int hp = 2, hf = 3, rp = 4, rf = d - k - 1 - rp;
    CHECK(key_lemma_dim(s, hp + rp + 1, hf + rf + 1, hp, hf) == hp + hf + 1);
  }

  TEST_CASE("Key-Lemma branch agreement on random inputs") {
    std::mt19937_64 rng(1);
    auto s = degenerate(L("L(30,10,6^12)"), 6, 4);
    for (int i = 0; i < 2000; ++i) {
      Int hp = testing::uniform(rng, -1, 50), hf = testing::uniform(rng, -1, 50);
      Int rp = testing::uniform(rng, -1, s.d - s.k);
      Int rf = s.d - s.k - 1 - rp;
      if (rf < -1) continue;
      Int lp = hp + rp + 1, lf = hf + rf + 1;
      CHECK(key_lemma_dim(s, lp, lf, hp, hf) == hp + hf + 1);
      CHECK(hp + hf + 1 == lp + lf - s.d + s.k);
    }
  }

  TEST_CASE("v identity for every split") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
      auto sys = testing::random_qh(rng, 40, 15);
      if (sys.degree() < 2) continue;
      for (Int k = 1; k < sys.degree(); ++k) {
        for (Int b = 0; b <= static_cast<Int>(sys.tail_points()); ++b) {
          auto s = degenerate(sys, k, b);
          CHECK(s.v_P + s.hat_v_F == virtual_dim(sys) - 1);
        }
      }
    }
  }

  TEST_CASE("b scan order") {
    auto order = b_scan_order(L("L(19,5,6^9)"), 5);
    CHECK(order.front() == 5);
    CHECK(order.size() == 9);
    std::vector<Int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (Int b = 0; b < 9; ++b) CHECK(sorted[b] == b);
  }

  TEST_CASE("emptiness and non-speciality lemmas") {
    CHECK_FALSE(prove_empty(L("L(14,0,6^6)"), 5, 3));
    for (Int b = 0; b < 2; ++b) CHECK_FALSE(prove_empty(L("L(10,8,6^2)"), 5, b));
    CHECK_THROWS(prove_empty(L("L(10,2,6^2)"), 5, 1));
    CHECK(prove_nonspecial(L("L(6,0,1^3)"), 5, 1));
    CHECK_THROWS(prove_nonspecial(L("L(10,8,6^2)"), 5, 1));
    for (Int k : {5, 6}) {
      for (Int b = 0; b < 9; ++b) CHECK_FALSE(prove_nonspecial(L("L(19,5,6^9)"), k, b));
    }
    // Mutually exclusive by their v preconditions.
    std::mt19937_64 rng(4);
    for (int i = 0; i < 40; ++i) {
      auto sys = testing::random_qh(rng, 20, 8);
      if (sys.degree() < 7 || sys.tail_points() < 2) continue;
      bool e = virtual_dim(sys) <= -1 && prove_empty(sys, 5, 1);
      bool n = virtual_dim(sys) >= -1 && prove_nonspecial(sys, 5, 1);
      CHECK_FALSE((e && n));
    }
  }

  TEST_CASE("recursive dimension") {
    DimVerdict a = recursive_dim(L("L(10,2,6^3)"));
    CHECK(a.status == DimStatus::SpecialKnown);
    CHECK(a.ell == 2);
    DimVerdict b = recursive_dim(L("L(19,5,6^9)"));
    CHECK(b.status == DimStatus::Regular);
    CHECK(b.ell == 5);
    DimVerdict c = recursive_dim(L("L(14,0,6^6)"));
    CHECK(c.status == DimStatus::Empty);
    DimVerdict z = recursive_dim(L("L(0)"));
    CHECK(z.status == DimStatus::Regular);
    CHECK(z.ell == 0);

    ProverOptions no_oracle;
    no_oracle.use_oracle = false;
    CHECK(recursive_dim(L("L(19,5,6^9)"), no_oracle).status == DimStatus::Unknown);
    ProverOptions tiny;
    tiny.max_nodes = 1;
    tiny.use_oracle = false;
    CHECK(recursive_dim(L("L(21,6,6^10)"), tiny).status == DimStatus::Unknown);
  }

  TEST_CASE("degeneration certificates") {
    ProverOptions no_oracle;
    no_oracle.use_oracle = false;
    std::size_t degenerations = 0;
    for (Int d = 18; d <= 24; ++d) {
      for (Int m0 = 0; m0 <= d; m0 += 3) {
        for (std::size_t n = 8; n <= 12; ++n) {
          auto sys = LinearSystem::quasi_homogeneous(d, m0, 6, n);
          DimVerdict v = recursive_dim(sys, no_oracle);
          if (!v.decisive()) continue;
          degenerations += v.trace->method == "degeneration";
          CHECK(check_certificate(v.trace).ok);
          if (v.non_special()) CHECK_MESSAGE(oracle_ell(sys) == v.ell, sys.to_string());
        }
      }
    }
    CHECK(degenerations > 0);
  }

  TEST_CASE("tampered certificates are rejected") {
    DimVerdict v = recursive_dim(L("L(10,2,6^3)"));
    auto doc = trace_to_json(v.trace);
    CHECK(check_certificate(trace_from_json(doc)).ok);
    auto bad = doc;
    for (auto& node : bad["nodes"]) {
      if (node["system"] == "L(10,2,6^3)") node["ell"] = 3;
    }
    CHECK_FALSE(check_certificate(trace_from_json(bad)).ok);

    DimVerdict o = recursive_dim(L("L(20,8,6^9)"));
    REQUIRE(o.trace->method == "oracle");
    auto odoc = trace_to_json(o.trace);
    // Any point set reaching full rank is a valid witness, so a new seed still replays.
    odoc["nodes"][0]["data"]["seed"] = 43;
    CHECK(check_certificate(trace_from_json(odoc)).ok);
    odoc["nodes"][0]["data"]["rank"] = 1;
    CHECK_FALSE(check_certificate(trace_from_json(odoc)).ok);
  }

  TEST_CASE("memo is shared across calls") {
    Prover p;
    p.dimension(L("L(22,10,6^10)"));
    std::size_t before = p.memo_size();
    CHECK(before > 0);
    p.dimension(L("L(22,10,6^10)"));
    CHECK(p.memo_size() == before);
  }
}
