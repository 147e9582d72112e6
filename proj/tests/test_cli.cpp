#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "l1persist/cli.hpp"
#include "l1persist/io.hpp"
#include "l1persist/simgen.hpp"

using namespace l1persist;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "l1persist");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "l1persist_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string path(const std::string& name) { return scratch(name).string(); }

}  // namespace

TEST_CASE("parse_real_list") {
  CHECK(parse_real_list("0.01:0.02:0.05") == std::vector<double>{0.01, 0.03, 0.05});
  CHECK(parse_real_list("1,2.5") == std::vector<double>{1.0, 2.5});
  CHECK_THROWS_AS(parse_real_list("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real_list("x"), std::invalid_argument);
}

TEST_CASE("help for every subcommand lists all of its flags") {
  const auto flags = cli_flags();
  CHECK(flags.size() == 8);
  for (const auto& [sub, names] : flags) {
    CAPTURE(sub);
    const Run r = run({sub, "--help"});
    CHECK(r.code == 0);
    for (const auto& name : names) {
      CAPTURE(name);
      CHECK(r.out.find(name) != std::string::npos);
    }
    if (sub != "solve" && sub != "oracle") {
      CHECK(std::find(names.begin(), names.end(), "--seed") != names.end());
    }
  }
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("simgen is byte-identical for a fixed seed") {
  for (const std::string name : {"a.csv", "b.csv"}) {
    const Run r = run({"simgen", "--scenario", "section4", "--n", "50", "--big-m", "40", "--seed", "7",
                       "--out", path(name)});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("simgen:") == 0);
  }
  CHECK(read_text_file(scratch("a.csv")) == read_text_file(scratch("b.csv")));
  const Dataset d = read_dataset(scratch("a.csv"));
  CHECK(d.m() == 45);
  CHECK(d.meta().proxy == ColumnRange{40, 45});
  CHECK(d.x() == gen_section4(50, 40, 7).x());

  CHECK(run({"simgen", "--scenario", "sparse-linear", "--n", "20", "--m", "8", "--sparsity", "2",
             "--sigma", "0.5", "--seed", "1", "--out", path("s.csv")}).code == 0);
  CHECK(run({"simgen", "--scenario", "null", "--n", "20", "--m", "8", "--seed", "1",
             "--variance-convention", "std", "--out", path("n.csv")}).code == 0);
}

TEST_CASE("solve writes a certified solution") {
  REQUIRE(run({"simgen", "--scenario", "section4", "--n", "100", "--big-m", "50", "--seed", "3",
               "--out", path("d.csv")}).code == 0);
  const Run r = run({"solve", "--loss", "exp", "--penalty", "l1", "--lambda", "0.05", "--data",
                     path("d.csv"), "--out", path("b.json")});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(read_text_file(scratch("b.json")));
  CHECK(j["report"]["converged"] == true);
  CHECK(j["report"]["kkt_residual"].get<double>() <= 1e-5);
  CHECK(j["coefficients"]["m"] == 55);

  CHECK(run({"solve", "--loss", "squared", "--penalty", "l1ball", "--budget", "1", "--data",
             path("d.csv"), "--out", path("c.json")}).code == 0);
  const auto c = nlohmann::json::parse(read_text_file(scratch("c.json")));
  CHECK(c["coefficients"]["l1"].get<double>() <= 1.0 + 1e-9);
}

TEST_CASE("argument errors exit with 2 and print usage") {
  Run r = run({"simgen", "--scenario", "section4", "--out", path("x.csv")});
  CHECK(r.code == 2);
  CHECK(r.err.find("--seed") != std::string::npos);
  CHECK(run({"simgen", "--bogus", "--seed", "1", "--out", path("x.csv")}).code == 2);
  CHECK(run({"solve", "--loss", "exp", "--penalty", "l1", "--data", path("d.csv"), "--out",
             path("x.json")}).code == 2);
  CHECK(run({"sweep", "--lambdas", "0.1:0.1", "--seed", "1", "--out", path("x.csv")}).code == 2);
  CHECK(run({"simgen", "--scenario", "section4", "--big-m", "10", "--seed", "1", "--out",
             path("x.csv")}).code == 2);
  CHECK(run({"nosuch"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("runtime errors exit with 1 and leave no output") {
  const fs::path target = scratch("never.json");
  fs::remove(target);
  const Run r = run({"solve", "--loss", "exp", "--penalty", "l1", "--lambda", "0.1", "--data",
                     path("does_not_exist.csv"), "--out", target.string()});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(target));
  CHECK_FALSE(fs::exists(target.string() + ".tmp"));

  write_file_atomic(scratch("broken.csv"), "y,x1\n1,zz\n");
  CHECK(run({"oracle", "--data", path("broken.csv"), "--k", "1", "--out", path("o.json")}).code == 1);
}

TEST_CASE("stochastic commands are deterministic per seed") {
  const std::vector<std::vector<std::string>> commands = {
      {"sweep", "--n", "40", "--big-m", "30", "--lambdas", "0.1,0.2", "--reps", "2", "--test-n", "50"},
      {"persist", "--ns", "20,30", "--reps", "2"},
      {"ridge-demo", "--n", "20", "--m", "100", "--budgets", "0:0.5:1", "--reps", "2"},
      {"deviation", "--n", "50", "--m", "10", "--probes", "20", "--k", "2"},
  };
  for (const auto& base : commands) {
    CAPTURE(base[0]);
    std::vector<std::string> texts;
    for (const std::string threads : {"1", "2"}) {
      auto args = base;
      const std::string out = path(base[0] + threads + ".out");
      args.insert(args.end(), {"--seed", "11", "--threads", threads, "--out", out});
      const Run r = run(args);
      REQUIRE(r.code == 0);
      texts.push_back(read_text_file(out));
    }
    CHECK(texts[0] == texts[1]);
  }
}

TEST_CASE("sparsify and oracle subcommands") {
  REQUIRE(run({"simgen", "--scenario", "sparse-linear", "--n", "40", "--m", "6", "--sparsity", "2",
               "--sigma", "0.1", "--seed", "2", "--out", path("sl.csv")}).code == 0);
  REQUIRE(run({"oracle", "--data", path("sl.csv"), "--k", "2", "--grid-radius", "1", "--grid-step",
               "0.25", "--out", path("o.json")}).code == 0);
  const auto o = nlohmann::json::parse(read_text_file(scratch("o.json")));
  CHECK(o["best_subset"]["subset"] == nlohmann::json::array({1, 2}));

  REQUIRE(run({"solve", "--loss", "squared", "--penalty", "l1ball", "--budget", "1.2", "--data",
               path("sl.csv"), "--out", path("sb.json")}).code == 0);
  std::vector<std::string> texts;
  for (int i = 0; i < 2; ++i) {
    REQUIRE(run({"sparsify", "--coef", path("sb.json"), "--kappa", "5", "--data", path("sl.csv"),
                 "--delta", "0.5", "--trials", "100", "--seed", "4", "--out", path("sp.json")}).code == 0);
    texts.push_back(read_text_file(scratch("sp.json")));
  }
  CHECK(texts[0] == texts[1]);
}

TEST_CASE("installed binary reports exit codes") {
  const std::string bin = L1PERSIST_CLI_PATH;
  CHECK(WEXITSTATUS(std::system((bin + " --help > /dev/null").c_str())) == 0);
  CHECK(WEXITSTATUS(std::system((bin + " simgen --out x 2> /dev/null").c_str())) == 2);
}
