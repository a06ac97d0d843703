#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "plateau/cli.hpp"

using namespace plateau;
using cli::json;

namespace {

std::string fresh_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("plateau-cli-" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("srw run writes the quoted d=1 table") {
  std::string dir = fresh_dir("srw");
  json cfg{{"subcommand", "srw"}, {"dim", 1}, {"mu_omega", 0.5}, {"box", 40},
           {"nmax", 200},         {"out", dir + "/srw.csv"}};
  auto rr = cli::run(cfg);
  REQUIRE(rr.exit_code == 0);
  auto csv = io::read_csv(dir + "/srw.csv");
  REQUIRE(csv.header == std::vector<std::string>{"x1", "value"});
  bool found = false;
  for (auto& row : csv.rows)
    if (row[0] == 0.0) {
      REQUIRE(row[1] == Catch::Approx(1.154701).margin(rr.report["series_tail"].get<double>() +
                                                       1e-6));
      found = true;
    }
  REQUIRE(found);
  REQUIRE(std::filesystem::exists(dir + "/srw.manifest.json"));
}

TEST_CASE("torus-srw fourier run reproduces the circulant values") {
  std::string dir = fresh_dir("torus");
  json cfg{{"subcommand", "torus-srw"}, {"dim", 1},           {"period", 3},
           {"z_omega", 0.5},            {"route", "fourier"}, {"out", dir + "/t.csv"}};
  auto rr = cli::run(cfg);
  REQUIRE(rr.exit_code == 0);
  auto csv = io::read_csv(dir + "/t.csv");
  REQUIRE(csv.rows.size() == 3);
  for (auto& row : csv.rows) {
    double want = row[0] == 0.0 ? 1.2 : 0.4;
    REQUIRE(row[1] == Catch::Approx(want).margin(1e-12));
  }
}

TEST_CASE("config validation failures throw invalid_argument") {
  REQUIRE_THROWS_AS(cli::run(json{{"subcommand", "nope"}}), std::invalid_argument);
  REQUIRE_THROWS_AS(cli::run(json{{"subcommand", "wsaw"},
                                  {"dim", 2},
                                  {"beta", 0.4},
                                  {"nmax", 6},
                                  {"observable", "bogus"}}),
                    std::invalid_argument);
  // both z and z_omega given
  REQUIRE_THROWS_AS(cli::run(json{{"subcommand", "torus-srw"},
                                  {"dim", 1},
                                  {"period", 3},
                                  {"z", 0.1},
                                  {"z_omega", 0.5}}),
                    std::invalid_argument);
}

TEST_CASE("budget refusal propagates as budget_error") {
  json cfg{{"subcommand", "wsaw"}, {"dim", 5}, {"beta", 0.1}, {"nmax", 20},
           {"observable", "zc"}};
  REQUIRE_THROWS_AS(cli::run(cfg), budget_error);
}

TEST_CASE("manifest rerun reproduces deterministic output bit-for-bit") {
  std::string dir = fresh_dir("rerun");
  json cfg{{"subcommand", "wsaw"},   {"dim", 2},       {"beta", 0.5},
           {"nmax", 8},              {"geometry", "zd"}, {"observable", "series"},
           {"out", dir + "/w.csv"}};
  auto rr = cli::run(cfg);
  REQUIRE(rr.exit_code == 0);
  std::string first = slurp(dir + "/w.csv");

  json rerun{{"subcommand", "rerun"}, {"manifest", dir + "/w.manifest.json"}};
  auto rr2 = cli::run(rerun);
  REQUIRE(rr2.exit_code == 0);
  REQUIRE(slurp(dir + "/w.csv") == first);
}

TEST_CASE("mc rerun is deterministic given (seed, shards)") {
  std::string dir = fresh_dir("mcrerun");
  json cfg{{"subcommand", "wsaw-mc"}, {"dim", 2},    {"beta", 0.4},  {"period", 4},
           {"z_omega", 0.4},          {"samples", 20000}, {"seed", 7}, {"shards", 3},
           {"observable", "two-point"}, {"out", dir + "/mc.csv"}};
  auto rr = cli::run(cfg);
  REQUIRE(rr.exit_code == 0);
  std::string first = slurp(dir + "/mc.csv");
  auto rr2 = cli::run(json{{"subcommand", "rerun"}, {"manifest", dir + "/mc.manifest.json"}});
  REQUIRE(rr2.exit_code == 0);
  REQUIRE(slurp(dir + "/mc.csv") == first);
}

TEST_CASE("unfold-check subcommand reports and exits clean on success") {
  json cfg{{"subcommand", "wsaw"},       {"dim", 1},
           {"beta", 0.5},                {"nmax", 7},
           {"geometry", "torus:3"},      {"observable", "unfold-check"}};
  auto rr = cli::run(cfg);
  REQUIRE(rr.exit_code == 0);
  REQUIRE(rr.report["factorization_ok"].get<bool>());
  REQUIRE(rr.report["pigeonhole_ok"].get<bool>());
}

TEST_CASE("lace subcommand emits the documented report fields") {
  json cfg{{"subcommand", "lace"}, {"dim", 2}, {"beta", 0.4}, {"nmax", 12},
           {"z_omega", 0.4}};
  auto rr = cli::run(cfg);
  REQUIRE(rr.exit_code == 0);
  for (const char* key : {"lambda", "mu_omega", "pi_moment0", "pi_moment2",
                          "e_moment_residuals", "f_sup_weighted", "identity_residual"})
    REQUIRE(rr.report.contains(key));
}

TEST_CASE("plateau profile plot has the decay-then-flat structure") {
  std::string dir = fresh_dir("plot");
  json cfg{{"subcommand", "torus-srw"}, {"dim", 3}, {"period", 8},
           {"rho", 1.0},  // z = z0 - r^{-2}
           {"route", "fourier"},        {"out", dir + "/prof.csv"},
           {"plot", true}};
  auto rr = cli::run(cfg);
  REQUIRE(rr.exit_code == 0);
  std::string svg = slurp(dir + "/prof.svg");
  REQUIRE(svg.find("plateau-plot kind=profile") != std::string::npos);
  REQUIRE(svg.find("xrange=[") != std::string::npos);
  // one polyline through five shell means (r/2 + 1 points)
  REQUIRE(svg.find("points=5") != std::string::npos);

  // and the generic plot subcommand re-emits from the persisted CSV
  json pc{{"subcommand", "plot"}, {"kind", "profile"}, {"in", dir + "/prof.csv"},
          {"out", dir + "/again.svg"}};
  REQUIRE(cli::run(pc).exit_code == 0);
  REQUIRE(std::filesystem::exists(dir + "/again.svg"));
}

TEST_CASE("PLATEAU_OUT_DIR prefixes relative outputs") {
  std::string dir = fresh_dir("envdir");
  setenv("PLATEAU_OUT_DIR", dir.c_str(), 1);
  json cfg{{"subcommand", "torus-srw"}, {"dim", 1}, {"period", 3}, {"z_omega", 0.5},
           {"route", "solve"},          {"out", "env.csv"}};
  auto rr = cli::run(cfg);
  unsetenv("PLATEAU_OUT_DIR");
  REQUIRE(rr.exit_code == 0);
  REQUIRE(std::filesystem::exists(dir + "/env.csv"));
}
