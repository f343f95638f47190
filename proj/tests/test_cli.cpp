#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "pdm/cli.hpp"
#include "pdm/error.hpp"

using namespace pdm::cli;
using testing::kPi;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find("\r\n", start);
    REQUIRE(end != std::string::npos);
    lines.push_back(text.substr(start, end - start));
    start = end + 2;
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  return fields;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("real list syntax") {
  CHECK(parse_real_list("2.5") == std::vector<double>{2.5});
  CHECK(parse_real_list("0, 1,10") == std::vector<double>{0.0, 1.0, 10.0});
  const auto r = parse_real_list("0..5:10");
  REQUIRE(r.size() == 11);
  CHECK(r.front() == 0.0);
  CHECK(r.back() == 5.0);
  CHECK(r[3] == doctest::Approx(1.5));
  CHECK(parse_real_list("0..1").size() == 51);
  CHECK_THROWS_AS(parse_real_list(""), pdm::DomainError);
  CHECK_THROWS_AS(parse_real_list("1,,2"), pdm::DomainError);
  CHECK_THROWS_AS(parse_real_list("a"), pdm::DomainError);
  CHECK_THROWS_AS(parse_real_list("0..1:0"), pdm::DomainError);
}

TEST_CASE("integer list syntax") {
  CHECK(parse_int_list("3") == std::vector<int>{3});
  CHECK(parse_int_list("1,3,5") == std::vector<int>{1, 3, 5});
  CHECK(parse_int_list("2..5") == std::vector<int>{2, 3, 4, 5});
  CHECK_THROWS_AS(parse_int_list("1.5"), pdm::DomainError);
  CHECK_THROWS_AS(parse_int_list("5..2"), pdm::DomainError);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"--help"}).code == kOk);
  CHECK(invoke({"well", "eigen", "--no-such-flag"}).code == kUsageError);
  CHECK(invoke({"well", "eigen", "--format", "xml"}).code == kUsageError);
  CHECK(invoke({"nonsense"}).code == kUsageError);
  const auto bad = invoke({"well", "eigen", "--gamma-L", "-1"});
  CHECK(bad.code == kDomainError);
  CHECK(bad.out.empty());
  CHECK(bad.err.find("domain error") != std::string::npos);
  CHECK(invoke({"well", "eigen", "--n", "0"}).code == kDomainError);
  CHECK(invoke({"qalg", "--op", "div", "--q", "0.5", "--a", "1", "--b", "-2"}).code == kDomainError);
}

TEST_CASE("eigen output reproduces the undeformed ground state") {
  const auto r = invoke({"well", "eigen", "--gamma-L", "0", "--n", "1"});
  REQUIRE(r.code == kOk);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "gamma_L,n,k_qn,E_n,E_shooting,rel_err,shooting_bracket");
  const auto f = split_fields(lines[1]);
  REQUIRE(f.size() == 7);
  CHECK(std::stod(f[3]) == doctest::Approx(kPi * kPi / 2).epsilon(1e-9));
  CHECK(std::stod(f[4]) == doctest::Approx(kPi * kPi / 2).epsilon(1e-8));
  CHECK(std::stod(f[5]) < 1e-8);
}

TEST_CASE("CSV and JSON framing") {
  const auto csv = invoke({"well", "density", "--gamma-L", "1", "--n", "2", "--grid-points", "5"});
  REQUIRE(csv.code == kOk);
  const auto lines = split_lines(csv.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "gamma_L,n,x,psi,psi2,envelope,classical");
  // Boundary values vanish exactly.
  CHECK(split_fields(lines[1])[3] == "0");

  const auto json = invoke({"well", "density", "--gamma-L", "1", "--n", "2", "--grid-points", "5",
                            "--format", "json"});
  REQUIRE(json.code == kOk);
  CHECK(json.out.rfind("{\n  \"schema\": 1,", 0) == 0);
  CHECK(json.out.find("\"command\": \"well density\"") != std::string::npos);
  CHECK(json.out.find("\"rows\"") != std::string::npos);
  CHECK(json.out.find("\"meta\"") != std::string::npos);
}

TEST_CASE("CSV quoting") {
  Dataset d;
  d.command = "t";
  d.columns = {"a", "b"};
  d.add_row({std::string("x,y"), std::string("say \"hi\"")});
  d.add_row({1.0 / 3.0, 7LL});
  std::ostringstream out;
  write_csv(d, out);
  CHECK(out.str() == "a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n0.3333333333,7\r\n");
  std::ostringstream js;
  d.rows.clear();
  d.add_row({std::nan(""), true});
  write_json(d, js);
  CHECK(js.str().find("[null, true]") != std::string::npos);
  CHECK(format_double(1.0 / 3.0, 17) == "0.33333333333333331");
  CHECK_THROWS_AS(d.add_row({1.0}), pdm::Error);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args = {"classical-sim", "--mode", "histogram", "--ensemble", "3",
                                         "--seed", "99", "--bins", "8", "--duration", "5"};
  const auto a = invoke(args), b = invoke(args);
  REQUIRE(a.code == kOk);
  CHECK(a.out == b.out);
  auto other = args;
  other[6] = "100";
  CHECK(invoke(other).out != a.out);
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "qpdm_cli_test.json";
  std::filesystem::remove(path);
  const auto r = invoke({"qalg", "--op", "exp", "--q", "0.5", "--a", "1", "--format", "json",
                         "--output", path.string()});
  REQUIRE(r.code == kOk);
  CHECK(r.out.empty());
  const auto text = slurp(path);
  CHECK(text.find("\"schema\": 1") != std::string::npos);
  // exp_q(1) at q = 1/2 is (1 + 1/2)^2.
  CHECK(text.find("2.25") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("check subcommand passes") {
  const auto outcome = run_check_suite();
  CHECK(outcome.all_passed);
  CHECK(outcome.data.rows.size() > 10);
  CHECK(invoke({"check"}).code == kOk);
}

TEST_CASE("golden files are byte-stable") {
  const char* dir = std::getenv("QPDM_GOLDEN_DIR");
  REQUIRE(dir != nullptr);
  const std::filesystem::path root(dir);
  struct Golden {
    const char* file;
    std::vector<std::string> args;
  };
  const Golden cases[] = {
      {"well_eigen.csv", {"well", "eigen", "--gamma-L", "0,2", "--n", "1,2", "--ode-steps", "2000"}},
      {"qalg_add.json", {"qalg", "--op", "add", "--q", "0.5", "--a", "0.3", "--b", "0.7", "--format", "json"}},
      {"well_density.csv", {"well", "density", "--gamma-L", "2", "--n", "1", "--grid-points", "11"}},
      {"histogram.csv",
       {"classical-sim", "--mode", "histogram", "--ensemble", "4", "--seed", "7", "--bins", "10",
        "--duration", "20"}},
  };
  for (const auto& g : cases) {
    CAPTURE(g.file);
    const auto r = invoke(g.args);
    REQUIRE(r.code == kOk);
    CHECK(r.out == slurp(root / g.file));
  }
}
