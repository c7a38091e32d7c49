#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dynint/cli/cli.hpp"
#include "dynint/io/report.hpp"
#include "dynint/io/structure_file.hpp"

using namespace dynint;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("dynint_test_" + name)).string();
}

}  // namespace

TEST_CASE("csv quoting and number formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  std::ostringstream os;
  write_csv_row(os, {"x", "y,z"});
  CHECK(os.str() == "x,\"y,z\"\n");
}

TEST_CASE("json helpers") {
  CHECK(number(std::nan("")).is_null());
  CHECK(number(2.5) == 2.5);
  const Json env = envelope(Json{{"command", "x"}}, Json{{"result", 1}}, std::nullopt);
  std::vector<std::string> keys;
  for (const auto& [k, v] : env.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"version", "caveat", "config", "result", "wall_time_ms"});
  CHECK(env["caveat"] == "numerical evidence, not proof");
}

TEST_CASE("structure files") {
  const auto s = parse_structure(R"({"dim": 2,
    "fields": [{"name": "rot", "components": ["-x2", "x1"]}],
    "integrals": ["x1^2 + x2^2"]})");
  CHECK(s.dim == 2);
  CHECK(s.fields[0].name() == "rot");
  CHECK(s.integrals[0].name() == "F1");
  const std::vector<double> x{3, 4};
  CHECK(s.integrals[0](x) == 25.0);
  CHECK(s.fields[0](x) == std::vector<double>{-4, 3});
  const auto ph = parse_structure(R"({"dim": 2, "phase_space": true, "fields": [["1", "0"]], "integrals": ["p1"]})");
  CHECK(ph.integrals[0](x) == 4.0);
  CHECK_THROWS_AS(parse_structure("{"), ConfigError);
  CHECK_THROWS_AS(parse_structure(R"({"dim": 2, "fields": [["x1"]]})"), ConfigError);
  CHECK_THROWS_AS(parse_structure(R"({"dim": 1, "fields": [["x1"]], "integrals": ["x1"]})"), ConfigError);
  CHECK_THROWS_AS(parse_structure(R"({"dim": 2, "integrals": ["x3"]})"), ConfigError);
}

TEST_CASE("cli: certify twist passes, corrupted twist fails") {
  const auto ok = run_cli({"certify", "--map", "twist", "--samples", "200", "--seed", "42"});
  CHECK(ok.code == 0);
  const Json j = Json::parse(ok.out);
  CHECK(j["verdict"] == "PASS");
  CHECK(j["config"]["seed"] == 42);
  CHECK(j["wall_time_ms"] == 0);
  const auto bad = run_cli({"certify", "--map", "twist", "--samples", "200", "--corrupt", "1:3:1"});
  CHECK(bad.code == 1);
  CHECK(Json::parse(bad.out)["verdict"] == "FAIL");
}

TEST_CASE("cli: lyness n = 2 has an empty bracket section") {
  const auto r = run_cli({"certify", "--map", "lyness", "--param", "n=2", "--param", "a=1", "--samples", "200"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["verdict"] == "PASS");
  bool empty_brackets = false;
  for (const auto& s : j["empty_sections"]) empty_brackets = empty_brackets || s == "brackets";
  CHECK(empty_brackets);
}

TEST_CASE("cli: exit codes and structured errors") {
  const auto unknown = run_cli({"certify", "--map", "nope"});
  CHECK(unknown.code == 2);
  CHECK(Json::parse(unknown.err)["error"]["kind"] == "config");
  CHECK(run_cli({"certify", "--map", "warned_circle", "--param", "eps=2"}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({"certify", "--map", "twist", "--param", "novalue"}).code == 2);
  const auto guard = run_cli({"orbit", "--map", "lyness", "--x0=-1,2", "-N", "3"});
  CHECK(guard.code == 3);
  CHECK(Json::parse(guard.err)["error"]["kind"] == "guard");
  CHECK(run_cli({"certify", "--map", "twist", "--structure", "/nonexistent.json"}).code == 2);
}

TEST_CASE("cli: data commands") {
  const auto list = run_cli({"list"});
  CHECK(list.code == 0);
  const Json l = Json::parse(list.out);
  bool lyness_unverified = false;
  for (const auto& m : l["maps"])
    if (m["name"] == "lyness") lyness_unverified = m["structure"] == "unverified";
  CHECK(lyness_unverified);

  const auto ly = run_cli({"lyapunov", "--map", "cat_map", "--x0", "0.3,0.7", "-N", "100000"});
  CHECK(ly.code == 0);
  CHECK(Json::parse(ly.out)["exponents"][0].get<double>() == doctest::Approx(0.9624).epsilon(1e-3));

  const auto orbit = run_cli({"orbit", "--map", "lyness", "--x0", "1,2", "-N", "5", "--format", "csv"});
  CHECK(orbit.code == 0);
  CHECK(orbit.out.rfind("k,x1,x2\n0,1,2\n1,2,3\n", 0) == 0);

  const auto cat = run_cli({"certify", "--map", "cat_map"});
  CHECK(cat.code == 0);
  const Json c = Json::parse(cat.out);
  CHECK(c["label"] == "no structure certified");
  CHECK(c["verdict"] == "UNVERIFIED");

  CHECK(run_cli({"periodic", "--map", "cat_map", "-k", "2"}).code == 0);
  CHECK(run_cli({"rotation", "--map", "warned_circle", "--x0", "0.1"}).code == 0);
  CHECK(run_cli({"drift", "--map", "lyness", "--x0", "1,2"}).code == 0);
  CHECK(run_cli({"translation", "--map", "affine1d", "--x0", "1"}).code == 0);
  CHECK(run_cli({"lift-certify", "--map", "linear", "--param", "blocks=2:3", "--samples", "100"}).code == 0);
}

TEST_CASE("cli: config file merges under explicit flags and output files") {
  const std::string cfg = temp_path("cfg.json");
  std::ofstream(cfg) << R"({"map": "lyness", "params": {"a": 2}, "samples": 50, "seed": 7})";
  const std::string out = temp_path("out.json");
  const auto r = run_cli({"certify", "--config", cfg, "--seed", "9", "--output", out});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  const Json j = Json::parse(in);
  CHECK(j["config"]["samples"] == 50);
  CHECK(j["config"]["seed"] == 9);
  CHECK(j["config"]["params"]["a"] == "2");
  std::ofstream(cfg) << R"({"map": "lyness", "bogus": 1})";
  CHECK(run_cli({"certify", "--config", cfg}).code == 2);
  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
}

TEST_CASE("cli: structure from file") {
  const std::string path = temp_path("structure.json");
  std::ofstream(path) << R"({"dim": 1, "fields": [{"name": "v", "components": ["x1 + 3"]}]})";
  const auto r = run_cli({"certify", "--map", "affine1d", "--structure", path, "--samples", "100"});
  CHECK(r.code == 0);
  std::ofstream(path) << R"({"dim": 1, "fields": [{"name": "v", "components": ["x1 + 2"]}]})";
  CHECK(run_cli({"certify", "--map", "affine1d", "--structure", path, "--samples", "100"}).code == 1);
  std::filesystem::remove(path);
}

TEST_CASE("cli: reports are byte-identical across runs") {
  const std::vector<std::string> args{"certify", "--map", "linear", "--param", "blocks=2:2,1.5:1", "--samples", "300"};
  CHECK(run_cli(args).out == run_cli(args).out);
}
