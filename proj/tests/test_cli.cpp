#include <cmath>
#include <sstream>

#include "doctest.h"
#include "phasekit/cli.hpp"
#include "phasekit/json_io.hpp"

using namespace phasekit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kQuarter = R"({"p":2,"n":1,"alpha":"0/2^0","terms":[{"exps":[1],"j":2,"coeff":1}]})";

}  // namespace

TEST_CASE("gowers of the eighth phase") {
  const auto r = run({"gowers", "--p", "2", "--n", "1", "--d", "3", "--poly", kQuarter});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["norm"].get<double>() == doctest::Approx(std::pow(0.75, 0.125)).epsilon(1e-12));
  CHECK(j["d"] == 3);
  CHECK(j["method"] == "phase_histogram");
  CHECK(j.contains("count"));

  const auto csv = run({"--format", "csv", "gowers", "--d", "3", "--poly", kQuarter});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("norm,d,method,count\n", 0) == 0);
}

TEST_CASE("counterexample output re-parses") {
  const auto r = run({"counterexample", "--p", "2", "--k", "4", "--n", "3"});
  REQUIRE(r.code == 0);
  CHECK(poly_from_json(r.json()) == make_counterexample(Field(2), 4, 3).poly);
  CHECK(run({"counterexample", "--p", "2", "--k", "2", "--n", "3"}).code == 1);
}

TEST_CASE("emitted polynomials re-parse") {
  const auto cex = run({"counterexample", "--p", "3", "--k", "5", "--n", "2"}).out;
  const auto poly = poly_from_json(Json::parse(cex));

  const auto canon = run({"canonicalize", "--poly", cex});
  REQUIRE(canon.code == 0);
  CHECK(poly_from_json(canon.json()) == poly);

  const auto derived = run({"derive", "--poly", cex, "--shift", "1,0", "--shift", "2,1"});
  REQUIRE(derived.code == 0);
  const auto dpoly = poly_from_json(derived.json()["poly"]);
  CHECK(dpoly == additive_derivative(additive_derivative(poly, FpVector{1, 0}), FpVector{2, 1}));
  CHECK(derived.json()["degree"] == degree_and_depth(dpoly).degree);
  // A derive report can be fed back in as --poly.
  CHECK(run({"eval", "--poly", derived.out, "--x", "1,1"}).code == 0);

  const auto q = run({"quasisym", "--p", "3", "--alpha", "[2,1]", "--n", "3"});
  REQUIRE(q.code == 0);
  CHECK(classical_from_json(q.json()) == quasisym_poly(Field(3), Composition({2, 1}), 3));

  const auto s = run({"--seed", "4", "search-max", "--p", "2", "--k", "4", "--n", "2"});
  REQUIRE(s.code == 0);
  CHECK(s.json()["best_value"].get<double>() == doctest::Approx(std::pow(std::cos(M_PI / 8), 2)));
  CHECK_NOTHROW(classical_from_json(s.json()["best_poly"]));

  const std::string low = R"({"p":3,"n":2,"alpha":"1/3^2","terms":[{"exps":[1,1],"j":0,"coeff":2},{"exps":[0,1],"j":1,"coeff":1}]})";
  const auto h = run({"hyperplane-extract", "--poly", low});
  REQUIRE(h.code == 0);
  CHECK(h.json()["corr"].get<double>() >= 1 / std::sqrt(3.0) - 1e-9);
  CHECK_NOTHROW(classical_from_json(h.json()["q_total"]));
  CHECK_NOTHROW(classical_from_json(h.json()["split"]["poly"]));
  CHECK(h.json()["split"]["matrix"].size() == 4);

  const std::string sym = R"({"p":2,"n":3,"terms":[{"exps":[1,1,0],"coeff":1},{"exps":[0,1,1],"coeff":1},{"exps":[1,0,1],"coeff":1}]})";
  const auto m = run({"--seed", "1", "symmetrize", "--poly", sym, "--d", "2"});
  REQUIRE(m.code == 0);
  CHECK(m.json()["search"]["subset"] == Json::array({0, 1, 2}));
  CHECK(m.json()["decomposition"]["coeffs"]["[1,1]"] == 1);
  CHECK(classical_from_json(m.json()["decomposition"]["remainder"]).is_zero());
  CHECK(m.json()["verification"]["passed"] == true);
}

TEST_CASE("fourier and correlate") {
  const auto f = run({"fourier", "--poly", kQuarter});
  REQUIRE(f.code == 0);
  const auto values = f.json()["values"];
  CHECK(std::hypot(values[0][0].get<double>(), values[0][1].get<double>()) ==
        doctest::Approx(std::cos(M_PI / 8)));
  const std::string zero = R"({"p":2,"n":1,"terms":[]})";
  const auto c = run({"correlate", "--poly", kQuarter, "--q", zero});
  CHECK(c.json()["corr"].get<double>() == doctest::Approx(std::cos(M_PI / 8)));
  const auto t = run({"correlate", "--table", R"({"p":2,"n":1,"values":[[1,0],[-1,0]]})", "--q",
                      R"({"p":2,"n":1,"terms":[{"exps":[1],"coeff":1}]})"});
  CHECK(t.json()["corr"].get<double>() == doctest::Approx(1.0));
  CHECK(run({"--format", "csv", "fourier", "--poly", kQuarter}).out.rfind("index,a,re,im,abs\n", 0) == 0);
}

TEST_CASE("seeds are reported and replayable") {
  const auto a = run({"search-max", "--p", "2", "--k", "4", "--n", "3", "--mode", "sampled", "--budget", "500"});
  REQUIRE(a.code == 0);
  CHECK(a.err.find("seed: ") != std::string::npos);
  const auto seed = a.json()["seed"].get<std::uint64_t>();
  const auto b = run({"--seed", std::to_string(seed), "search-max", "--p", "2", "--k", "4", "--n", "3", "--mode",
                      "sampled", "--budget", "500", "--jobs", "3"});
  CHECK(b.err.empty());
  CHECK(a.out == b.out);
  const auto quiet = run({"--quiet", "zero-prob", "--p", "2", "--r", "2", "--product"});
  CHECK(quiet.err.empty());
  CHECK(quiet.json()["probability"] == 0.75);
}

TEST_CASE("exit codes") {
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"gowers", "--poly", kQuarter}).code == 2);
  CHECK(run({"--format", "xml", "counterexample", "--p", "2", "--k", "4", "--n", "1"}).code == 2);
  CHECK(run({"--format", "csv", "counterexample", "--p", "2", "--k", "4", "--n", "1"}).code == 2);
  CHECK(run({"eval", "--poly", R"({"p":2,"n":1,"terms":[{"exps":[2],"coeff":1}]})"}).code == 1);
  CHECK(run({"eval", "--poly", "{not json"}).code == 1);
  CHECK(run({"eval", "--poly", "/nonexistent/poly.json"}).code == 1);
  CHECK(run({"counterexample", "--p", "4", "--k", "5", "--n", "1"}).code == 1);
  CHECK(run({"gowers", "--p", "3", "--d", "3", "--poly", kQuarter}).code == 1);
  const auto budget = run({"search-max", "--p", "2", "--k", "4", "--n", "5", "--mode", "exhaustive", "--budget", "100"});
  CHECK(budget.code == 1);
  CHECK(budget.err.find("33554432") != std::string::npos);
}

TEST_CASE("decay curve and zero-prob output") {
  const auto c = run({"--format", "csv", "--seed", "0", "decay-curve", "--p", "2", "--k", "4", "--n", "3"});
  REQUIRE(c.code == 0);
  std::istringstream lines(c.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,p,k,d,mode,best_value,candidates,seed");
  std::getline(lines, line);
  CHECK(line.rfind("1,2,4,3,exhaustive,0.92387953251128", 0) == 0);
  int rows = 1;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 3);

  const auto j = run({"--seed", "0", "decay-curve", "--p", "2", "--k", "3", "--n", "2"});
  CHECK(j.json()["boundary"] == true);

  const auto z = run({"zero-prob", "--p", "3", "--r", "1", "--coeffs", "0,1"});
  CHECK(z.json()["probability"].get<double>() == doctest::Approx(1.0 / 3));
  CHECK(run({"zero-prob", "--p", "2", "--r", "1", "--coeffs", "1,0"}).code == 1);
}

TEST_CASE("verify battery") {
  const auto r = run({"verify", "--suite", "all", "--p", "2", "--k", "4", "--n", "3", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto j = r.json();
  CHECK(j["passed"] == true);
  CHECK(j["checks"].get<std::uint64_t>() > 1000);
  CHECK(j["failures"].empty());
  CHECK(run({"verify", "--suite", "nope"}).code == 1);
  const auto q = run({"--seed", "3", "quasisym", "--p", "2", "--k", "3", "--n", "2"});
  CHECK(q.code == 0);
  CHECK(q.json()["passed"] == true);
}
