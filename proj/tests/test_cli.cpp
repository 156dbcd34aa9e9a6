#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(HYLENT_CLI) + " -q " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string golden(const std::string& name) { return std::string(HYLENT_GOLDEN_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("extrapolate matches golden output") {
  const auto r = run("extrapolate --series " + golden("helium_table.csv"));
  CHECK(r.code == 0);
  CHECK(r.out == slurp(golden("helium_extrapolate.csv")));

  const auto ps = run("extrapolate --uncertainty-floor 1e-5 --series " + golden("ps_minus_table.csv"));
  CHECK(ps.code == 0);
  CHECK(ps.out == slurp(golden("ps_minus_extrapolate.csv")));
}

TEST_CASE("solve matches golden output") {
  const auto r = run("solve -w 0 -p 15");
  CHECK(r.code == 0);
  CHECK(r.out == slurp(golden("solve_w0.csv")));
}

TEST_CASE("json output carries the schema version") {
  const auto r = run("solve -s h-minus -w 1 -p 15 -f json");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("schema_version") == 1);
  CHECK(doc.at("command") == "solve");
  REQUIRE(doc.at("rows").size() == 1);
  CHECK(doc.at("rows")[0].at("n_terms") == 3);
  CHECK(doc.at("rows")[0].at("energy").get<double>() < -0.5);
}

TEST_CASE("entropy of a single term is zero") {
  const auto r = run("entropy -w 0 -p 15 -f json");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(std::abs(doc.at("rows")[0].at("linear_entropy").get<double>()) < 1e-12);
}

TEST_CASE("exit codes") {
  CHECK(run("").code == 2);
  CHECK(run("bogus").code == 2);
  CHECK(run("solve -s lithium").code == 2);
  CHECK(run("solve -w 3 --alpha-low 3 --alpha-high 4 -p 15").code == 3);
  CHECK(run("solve -w 0", "HYLL_PRECISION_DIGITS=40").code == 2);
  CHECK(run("solve -w 0 -p 15", "HYLL_PRECISION_DIGITS=40").code == 0);
  CHECK(run("extrapolate --series /nonexistent/file.csv").code == 2);
}

TEST_CASE("verify is reproducible and catches corruption") {
  const std::string args = "verify --keys 3 --samples 20000 --seed 5";
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("schema_version") == 0);
  CHECK(run(args + " --corrupt").code == 2);
}
