#include <fstream>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = linsys::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("dim") {
    auto r = run({"dim", "L(10,2,6^3)", "--json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "SpecialKnown");
    CHECK(j["ell"] == 2);
    auto zero = run({"dim", "L(0)"});
    CHECK(zero.code == 0);
    CHECK(zero.out.find("Regular, ell = 0") != std::string::npos);
    CHECK(run({"dim", "L(19,4,6^9)", "--no-oracle"}).code == 1);
  }

  TEST_CASE("vdim") {
    auto r = run({"vdim", "L(24,16,6^9)", "--json"});
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["v"] == -1);
    CHECK(j["e"] == -1);
  }

  TEST_CASE("input errors") {
    auto r = run({"vdim", "L(10,2,6^x)"});
    CHECK(r.code == 2);
    CHECK(r.err.find("^") != std::string::npos);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"cremona", "L(10,2,6^3)", "--move", "1,2,3"}).code == 2);
    CHECK(run({"oracle", "L(10,2,6^3)", "--prime", "7"}).code == 2);
    CHECK(run({"check-certificate", "/nonexistent/trace.json"}).code == 2);
  }

  TEST_CASE("oracle JSON fields") {
    auto r = run({"oracle", "--system", "L(22,7,6^12)", "--prime", "32003", "--seed", "42", "--trials", "3", "--json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"system", "prime", "seed", "rank", "ell", "certified_regular"}) CHECK(j.contains(key));
    CHECK(j["ell"] == -1);
  }

  TEST_CASE("certificate round trip") {
    auto path = (std::filesystem::temp_directory_path() / "linsys_cli_cert.json").string();
    auto r = run({"dim", "L(14,0,6^6)", "--certificate", path});
    CHECK(r.code == 0);
    auto c = run({"check-certificate", path, "--json"});
    CHECK(c.code == 0);
    CHECK(nlohmann::json::parse(c.out)["ok"] == true);
    std::filesystem::remove(path);
  }

  TEST_CASE("classify, cremona, degen") {
    auto c = run({"classify", "L(10,2,6^3)", "--json"});
    CHECK(nlohmann::json::parse(c.out)["special"] == true);
    auto m = run({"cremona", "L(14,5,6^5)", "--move", "1,2,3", "--json"});
    CHECK(nlohmann::json::parse(m.out)["result"] == "L(10,5,2^3,6^2)");
    auto d = run({"degen", "L(14,0,6^6)", "-k", "5", "-b", "3", "--json"});
    CHECK(nlohmann::json::parse(d.out)["L_P"] == "L(9,0,6^3)");
  }

  TEST_CASE("config file with flag override") {
    auto path = (std::filesystem::temp_directory_path() / "linsys_cli.toml").string();
    {
      std::ofstream f(path);
      f << "seed = 7\ntrials = 2\n";
    }
    auto r = run({"--config", path, "oracle", "L(9,0,6^3)", "--seed", "9", "--json"});
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["seed"] == 9);
    CHECK(j["trials"] == 2);
    std::filesystem::remove(path);
  }

  TEST_CASE("table generate and verify") {
    auto g = run({"table", "generate", "--e-max", "1", "--symbolic"});
    CHECK(g.code == 0);
    CHECK(g.out.rfind("d_minus_m0,system,v,ell,range,boundary_case\n", 0) == 0);
    auto v = run({"table", "verify", "--mode", "hh", "--e-max", "2", "--json"});
    CHECK(v.code == 0);
    CHECK(nlohmann::json::parse(v.out)["failed"] == 0);
  }
}
