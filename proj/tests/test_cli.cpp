#include <string>

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "qch/scenarios.hpp"
#include "subprocess.hpp"

using nlohmann::json;
using testutil::run_command;
using testutil::write_temp_file;

namespace {
const std::string kCli = QCH_CLI_PATH;
}

TEST_CASE("built-in scenarios exit zero") {
  for (const char* name : {"hardy", "ensemble", "dragon", "marginals", "brownian"}) {
    auto r = run_command(kCli + " scenario " + name);
    INFO(name << " stderr: " << r.err);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("result: pass") != std::string::npos);
  }
  auto singlet = run_command(kCli + " scenario singlet --w-theta 0 --v-theta 1.5707963");
  CHECK(singlet.exit_code == 0);
  auto random_singlet = run_command(
      kCli + " scenario singlet --w-theta 1.1 --w-phi 2.2 --v-theta 0.7 --random-b-unitary --seed 5");
  CHECK(random_singlet.exit_code == 0);
}

TEST_CASE("scenario flags are honored") {
  auto r = run_command(kCli + " scenario dragon --alpha-re 0.6 --beta-re 0.8 --format json");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  bool found = false;
  for (const auto& line : doc["lines"])
    if (line["label"] == "Pr(pointer = 1)") {
      found = true;
      CHECK(std::abs(line["value"].get<double>() - 0.64) < 1e-12);
    }
  CHECK(found);
}

TEST_CASE("json and text formats carry identical values") {
  auto text = run_command(kCli + " scenario hardy");
  auto as_json = run_command(kCli + " scenario hardy --format json");
  REQUIRE(text.exit_code == 0);
  REQUIRE(as_json.exit_code == 0);
  json doc = json::parse(as_json.out);
  CHECK(doc["pass"] == true);
  for (const auto& line : doc["lines"]) {
    std::string label = line["label"].get<std::string>();
    std::string value = qch::format_value(line["value"].get<double>());
    INFO("line " << label << " with value " << value);
    CHECK(text.out.find(label) != std::string::npos);
    CHECK(text.out.find(value) != std::string::npos);
  }
}

TEST_CASE("check evaluates a well-formed scenario file") {
  std::string path = write_temp_file("cli_good.json", R"({
    "dimension": 2,
    "kets": { "zp": [[1,0],[0,0]] },
    "projectors": { "Pz": { "span": ["zp"] } },
    "queries": [ { "type": "born", "projector": "Pz", "state": "zp", "expect": 1.0 } ]
  })");
  auto r = run_command(kCli + " check " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("pass") != std::string::npos);
}

TEST_CASE("expectation failures exit one") {
  std::string path = write_temp_file("cli_fail.json", R"({
    "dimension": 2,
    "kets": { "zp": [[1,0],[0,0]] },
    "projectors": { "Pz": { "span": ["zp"] } },
    "queries": [ { "type": "born", "projector": "Pz", "state": "zp", "expect": 0.5 } ]
  })");
  auto r = run_command(kCli + " check " + path);
  CHECK(r.exit_code == 1);
}

TEST_CASE("malformed JSON exits two with a position") {
  std::string path = write_temp_file("cli_bad.json", "{ \"dimension\": 2,\n  \"kets\": [broken");
  auto r = run_command(kCli + " check " + path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("ParseError") != std::string::npos);
  CHECK(r.err.find("line") != std::string::npos);
}

TEST_CASE("undefined names exit two with the name and location") {
  std::string path = write_temp_file("cli_unknown.json", R"({
    "dimension": 2,
    "queries": [ { "type": "born", "projector": "ghost", "state": "ghost" } ]
  })");
  auto r = run_command(kCli + " check " + path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("UnknownName") != std::string::npos);
  CHECK(r.err.find("ghost") != std::string::npos);
}

TEST_CASE("missing files and unknown scenarios exit two") {
  CHECK(run_command(kCli + " check /nonexistent/file.json").exit_code == 2);
  CHECK(run_command(kCli + " scenario warp-drive").exit_code == 2);
  CHECK(run_command(kCli + " --bogus-flag scenario hardy").exit_code == 2);
}

TEST_CASE("the tolerance flag is applied globally") {
  // The projector matrix is deflated by 1e-7: invalid at the default
  // tolerance, acceptable at 1e-5.
  std::string path = write_temp_file("cli_tol.json", R"({
    "dimension": 2,
    "kets": { "zp": [[1,0],[0,0]] },
    "projectors": { "P": { "matrix": [[[0.9999999,0],[0,0]],[[0,0],[0,0]]] } },
    "queries": [ { "type": "born", "projector": "P", "state": "zp" } ]
  })");
  CHECK(run_command(kCli + " check " + path).exit_code == 2);
  CHECK(run_command(kCli + " --tol 1e-5 check " + path).exit_code == 0);
}

TEST_CASE("hardy-search regenerates the committed instance") {
  auto r = run_command(kCli + " hardy-search --coarse 72 --format json");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  for (const auto& line : doc["lines"])
    if (line["label"] == "max Pr(A,~D) found")
      CHECK(std::abs(line["value"].get<double>() - 0.09016994374947424) < 1e-6);
}
