// End-to-end runs of the ghyltl binary.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "ghyltl/hyper.hpp"
#include "ghyltl/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int exit = -1;
  std::string out;
  std::string err;
};

std::string data(const std::string& name) { return std::string(GHYLTL_TEST_DATA) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const fs::path err = fs::temp_directory_path() / "ghyltl_cli_stderr.txt";
  const std::string cmd = std::string(GHYLTL_BIN) + " " + args + " 2>" + err.string();
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

nlohmann::json report(const Run& r) {
  auto j = nlohmann::json::parse(r.out);
  j.erase("timing_ms");
  return j;
}

} // namespace

TEST_CASE("eval exit codes") {
  CHECK(run("eval " + data("singleton.json") + " " + data("noninterference.hyper")).exit == 0);
  CHECK(run("eval " + data("leak.json") + " " + data("noninterference.hyper")).exit == 1);
  CHECK(run("eval " + data("periodic_equal.json") + " " + data("periodic_pair.hyper")).exit == 0);
  CHECK(run("eval " + data("periodic_unequal.json") + " " + data("periodic_pair.hyper")).exit == 1);
}

TEST_CASE("errors exit with 3") {
  const auto bad = run("eval " + data("singleton.json") + " " + data("bad_syntax.hyper"));
  CHECK(bad.exit == 3);
  CHECK(bad.err.find("2:3:") != std::string::npos);
  CHECK(run("eval " + data("missing.json") + " " + data("noninterference.hyper")).exit == 3);
  CHECK(run("check " + data("missing.json") + " " + data("exists_hash.hyper")).exit == 3);
  CHECK(run("compile " + data("open_formula.arith") + " " + (fs::temp_directory_path() / "ghyltl_open").string()).exit == 3);
  const auto j = run("--json eval " + data("missing.json") + " " + data("noninterference.hyper"));
  CHECK(j.exit == 3);
  CHECK(nlohmann::json::parse(j.out).contains("error"));
}

TEST_CASE("check soundness annotation") {
  CHECK(run("check " + data("context_system.json") + " " + data("exists_hash.hyper")).exit == 0);
  const auto r = run("--json check " + data("context_system.json") + " " + data("forall_exists.hyper"));
  CHECK(r.exit == 2);
  CHECK(nlohmann::json::parse(r.out).contains("limiting_bound"));
}

TEST_CASE("gadget runs") {
  CHECK(run("gadget --op add --n1 5 --n2 4 --n3 9 --encoding stutter").exit == 0);
  CHECK(run("gadget --op mul --n1 3 --n2 7 --n3 21 --encoding context").exit == 0);
  CHECK(run("gadget --op mul --n1 2 --n2 2 --n3 5").exit == 1);
  CHECK(run("gadget --op mul --n1 3 --n2 7 --n3 21 --encoding context --max-period 2").exit == 3);
}

TEST_CASE("sat, prenex and oracle") {
  const auto sat = run("sat " + data("contradiction.hyper"));
  CHECK(sat.exit == 1);
  const auto pre = run("--json prenex " + data("prenex_input.hyper"));
  CHECK(pre.exit == 0);
  const auto in = ghyltl::hyper::parse(slurp(data("prenex_input.hyper")));
  CHECK(nlohmann::json::parse(pre.out)["formula"] == ghyltl::hyper::to_string(in));
  const auto nested = run("--json prenex " + data("nested_quantifier.hyper") + " --traces " + data("nested_model.json"));
  CHECK(nested.exit == 0);
  const auto nj = nlohmann::json::parse(nested.out);
  CHECK(nj["verdict"] == nj["original_verdict"]);
  const auto oracle = run("--json oracle " + data("product.arith") + " --bound 13");
  CHECK(oracle.exit == 0);
  CHECK(nlohmann::json::parse(oracle.out)["verdict"] == "true");
}

TEST_CASE("reports are deterministic") {
  const std::string args = "--json eval " + data("leak.json") + " " + data("noninterference.hyper");
  CHECK(report(run(args)) == report(run(args)));
  const std::string g = "--json gadget --op add --n1 2 --n2 3 --n3 5";
  CHECK(report(run(g)) == report(run(g)));
}

TEST_CASE("emitted files re-parse") {
  const fs::path out = fs::temp_directory_path() / "ghyltl_cli_compile";
  fs::remove_all(out);
  const auto r = run("compile --encoding context " + data("mul_sentence.arith") + " " + out.string());
  REQUIRE(r.exit == 0);
  const std::string formula = slurp(out / "formula.txt");
  const auto f = ghyltl::hyper::parse(formula);
  CHECK(ghyltl::hyper::to_string(f) + "\n" == formula);
  const std::string system = slurp(out / "system.json");
  CHECK(ghyltl::io::ts_to_json(ghyltl::io::parse_ts(system)) == system);
  CHECK(nlohmann::json::parse(slurp(out / "varmap.json")).contains("a"));

  const fs::path model = fs::temp_directory_path() / "ghyltl_cli_model.json";
  const auto s = run("sat " + data("noninterference.hyper") + " --out " + model.string());
  REQUIRE(s.exit == 0);
  const std::string text = slurp(model);
  CHECK(ghyltl::io::traceset_to_json(ghyltl::io::parse_traceset(text)) == text);
}
