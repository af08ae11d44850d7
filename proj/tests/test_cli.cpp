#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "minicog/corpus.hpp"

using namespace minicog;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(MINICOGENT_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/minicogent_test_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("typecheck: 0 on success, 1 on a type error, 2 on missing file") {
  std::string good = write_temp("sum.mc", corpus_program("sum").source);
  CHECK(run_cli("typecheck " + good).exit_code == 0);

  std::string bad = write_temp("alias.mc",
                               "abstract Array a\n"
                               "fun f (x : Array U32) -> (Array U32, Array U32) = (x, x)\n");
  RunResult r = run_cli("typecheck " + bad);
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("consumed") != std::string::npos);

  CHECK(run_cli("typecheck /nonexistent/nothing.mc").exit_code == 2);
}

TEST_CASE("run: sum over [1,2,3] answers 6 at every layer") {
  std::string path = write_temp("sum.mc", corpus_program("sum").source);
  for (const char* layer : {"shallow", "value", "update", "low"}) {
    RunResult r = run_cli("run " + path + " sum '[1, 2, 3]' --layer " + layer);
    CAPTURE(layer);
    CHECK(r.exit_code == 0);
    CHECK(r.output.substr(0, 2) == "6\n");
  }
  // update and low layers also print a digest
  CHECK(run_cli("run " + path + " sum '[1]' --layer update").output.find("store digest:") !=
        std::string::npos);
  CHECK(run_cli("run " + path + " sum '[1]' --layer low").output.find("heap digest:") !=
        std::string::npos);
}

TEST_CASE("run: binary search over [1,3,5,7] for 5 answers 2") {
  std::string path = write_temp("bs.mc", corpus_program("binsearch").source);
  RunResult r = run_cli("run " + path + " binary_search '([1, 3, 5, 7], 5)' --layer value");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "2\n");

  RunResult low = run_cli("run " + path + " binary_search '([1, 3, 5, 7], 5)' --layer low");
  CHECK(low.exit_code == 0);
  CHECK(low.output.substr(0, 2) == "2\n");

  RunResult json =
      run_cli("run " + path + " binary_search '([1, 3, 5, 7], 9)' --format json");
  CHECK(json.exit_code == 0);
  CHECK(json.output.find("\"result\":\"4\"") != std::string::npos);  // absent: length
}

TEST_CASE("run: an unknown layer is a usage error") {
  std::string path = write_temp("sum.mc", corpus_program("sum").source);
  RunResult r = run_cli("run " + path + " sum '[1]' --layer warp");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("unknown layer") != std::string::npos);
}

TEST_CASE("check: exit 0 on a clean suite, usage error on unknown suites") {
  CHECK(run_cli("check thm4 --trials 12 --seed 3").exit_code == 0);
  CHECK(run_cli("check nonsense").exit_code == 2);
}

TEST_CASE("check: same seed twice gives byte-identical reports") {
  RunResult a = run_cli("check thm5 --trials 15 --seed 9 --format json --no-timestamp");
  RunResult b = run_cli("check thm5 --trials 15 --seed 9 --format json --no-timestamp");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("MINICOGENT_SEED is the fallback seed") {
  RunResult a = run_cli("check thm5 --trials 10 --seed 77 --format json --no-timestamp");
  std::string cmd = std::string("MINICOGENT_SEED=77 ") + MINICOGENT_BIN +
                    " check thm5 --trials 10 --format json --no-timestamp 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  pclose(pipe);
  CHECK(out == a.output);
}

TEST_CASE("demo walks all five layers") {
  RunResult r = run_cli("demo sum");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("shallow") != std::string::npos);
  CHECK(r.output.find("machine") != std::string::npos);
  CHECK(r.output.find("FAILS") == std::string::npos);

  RunResult bs = run_cli("demo binsearch");
  CHECK(bs.exit_code == 0);
  CHECK(bs.output.find("heap bytes unchanged by the search: yes") != std::string::npos);

  CHECK(run_cli("demo bogus").exit_code == 2);
}

TEST_CASE("shipped corpus files match the embedded sources") {
  for (const char* name : {"sum", "binsearch", "bump", "poly_demo"}) {
    std::ifstream in(std::string(MINICOGENT_CORPUS_DIR) + "/" + name + ".mc");
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == corpus_program(name).source);
  }
}

}  // TEST_SUITE
