#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nng/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "nng");
  std::ostringstream out, err;
  const int code = nng::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("energy in human form") {
  const Result r = run({"energy", "--builtin", "fig2", "--state", "A-A-A-B-B-B", "--mode", "limit"});
  CHECK(r.code == 0);
  CHECK(r.out.find("H = -4.72295\n") != std::string::npos);
  CHECK(r.out.find("# {0,1,2}\t15\t") != std::string::npos);
  CHECK(r.out.find("-0\t") == std::string::npos);
}

TEST_CASE("energy as json") {
  const Result r = run({"energy", "--builtin", "fig2", "--state", "A-A-A-A-B-B", "--mode", "limit", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["data"]["H"].get<double>() == doctest::Approx(-2.8904).epsilon(1e-4));
  CHECK(doc["meta"]["command"] == "energy");
  CHECK(doc["meta"]["invocation"].get<std::string>().find("--state A-A-A-A-B-B") != std::string::npos);
}

TEST_CASE("exact report") {
  const Result r = run({"exact", "--builtin", "fig2", "--epsilon", "0.01", "--words", "2"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  for (const char* key : {"tv", "max_db_residual", "max_delta_pi", "states", "epsilon"}) CHECK(doc["data"].contains(key));
  CHECK(doc["data"]["states"] == 729);
}

TEST_CASE("usage errors exit 2") {
  const Result r = run({"energy", "--frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"energy", "--mode", "sideways"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
}

TEST_CASE("runtime errors exit 1") {
  CHECK(run({"energy", "--builtin", "fig1", "--state", "A-A", "--mode", "limit"}).code == 1);
  const Result bad = run({"energy", "--builtin", "fig2", "--state", "A-C-A-A-A-A"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("error:") == 0);
  CHECK(run({"energy", "--state", "A-A"}).code == 1);
  CHECK(run({"simulate", "--builtin", "fig2", "--steps", "10", "--burnin", "10"}).code == 1);
  CHECK(run({"gen-graph", "--n", "60", "--blocks", "20,20,20", "--p-in", "1", "--p-out", "0"}).code == 1);
}

TEST_CASE("seeded commands are reproducible") {
  const std::vector<std::string> sim{"simulate", "--builtin", "fig2", "--steps", "20000", "--seed", "5", "--chains", "2"};
  const Result a = run(sim), b = run(sim);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("# projector=strict-count:A steps=20000 burnin=120 thin=6\n", 0) == 0);

  const std::vector<std::string> det{"detect", "--builtin", "fig2", "--steps", "200000", "--seed", "5"};
  const Result c = run(det), d = run(det);
  REQUIRE(c.code == 0);
  CHECK(c.out == d.out);
  const auto doc = nlohmann::json::parse(c.out);
  CHECK(doc["data"][0]["state"] == "A-A-A-B-B-B");

  const std::vector<std::string> gen{"gen-graph", "--n", "60", "--blocks", "20,20,20", "--p-in", "0.5", "--p-out", "0.02", "--seed", "7"};
  const Result e = run(gen), f = run(gen);
  REQUIRE(e.code == 0);
  CHECK(e.out == f.out);
}

TEST_CASE("generated graph feeds back in") {
  const std::string path = "cli_test_graph.txt";
  REQUIRE(run({"gen-graph", "--n", "12", "--blocks", "6,6", "--p-in", "0.8", "--p-out", "0.1", "--seed", "2", "--out", path}).code == 0);
  const Result r = run({"cliques", "--graph", path, "--format", "json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["data"]["by_size"]["1"] == 12);
  std::remove(path.c_str());
}

TEST_CASE("local specification output") {
  const Result r = run({"local-spec", "--builtin", "fig1", "--state", "AB-A", "--site", "1", "--mode", "limit"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("p(A) = 0.5\n") != std::string::npos);
  CHECK(r.out.find("f(AB) = 0.333333\n") != std::string::npos);
  // site 0 hears only A: zero probability for B in the limit
  const Result d = run({"local-spec", "--builtin", "fig1", "--state", "AB-A", "--site", "0", "--mode", "limit"});
  CHECK(d.code == 1);
  CHECK(d.err.find("diverges") != std::string::npos);
  const Result j = run({"local-spec", "--builtin", "fig2", "--state", "A-A-A-B-B-B", "--site", "0", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  const double total = doc["data"]["f"]["A"].get<double>() + doc["data"]["f"]["B"].get<double>() +
                       doc["data"]["f"]["AB"].get<double>();
  CHECK(total == doctest::Approx(1.0));
}
