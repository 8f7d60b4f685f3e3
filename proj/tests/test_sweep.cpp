#include <doctest.h>

#include "c2e/report.hpp"
#include "c2e/suites.hpp"

using namespace c2e;

namespace {

SuiteRequest request(const std::string& suite, const std::string& chart, std::size_t points, std::size_t trials,
                     std::uint64_t seed = 3) {
  SuiteRequest r;
  r.suite = suite;
  r.chart = chart;
  r.sweep = {points, trials, seed, 1e-7};
  return r;
}

void require_identical(const VerificationReport& a, const VerificationReport& b) {
  REQUIRE(a.results.size() == b.results.size());
  CHECK(a.points == b.points);
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    INFO(a.results[i].name);
    CHECK(a.results[i].name == b.results[i].name);
    // bitwise: the same streams feed the same arithmetic
    CHECK(a.results[i].max_residual == b.results[i].max_residual);
    CHECK(a.results[i].worst_point == b.results[i].worst_point);
    CHECK(a.results[i].pass == b.results[i].pass);
  }
}

}  // namespace

TEST_CASE("parallel and serial sweeps give identical reports") {
  for (const auto& r : {request("identities", "perturbed:2", 4, 2), request("onesol", "s2xs2", 3, 2),
                        request("bgg-flat", "s2xs2", 4, 2), request("np", "", 8, 1),
                        request("nosol", "perturbed3:2", 4, 2)}) {
    INFO(r.suite);
    const VerificationReport s = run_suite(r, Execution::Serial);
    const VerificationReport p = run_suite(r, Execution::Parallel);
    require_identical(s, p);
    const RunConfig cfg;
    CHECK(report_body(report_json(s, cfg, 1.0)) == report_body(report_json(p, cfg, 2.0)));
  }
}

TEST_CASE("point streams do not depend on the number of points") {
  const VerificationReport a = run_suite(request("np", "", 3, 1), Execution::Parallel);
  const VerificationReport b = run_suite(request("np", "", 6, 1), Execution::Parallel);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a.points[i] == b.points[i]);
  const VerificationReport c = run_suite(request("np", "", 3, 1, 4), Execution::Parallel);
  CHECK(a.points[0] != c.points[0]);
}

TEST_CASE("identity suite on flat space marks generic identities not applicable") {
  const VerificationReport r = run_suite(request("identities", "flat", 2, 1), Execution::Parallel);
  const IdentityResult* comp = r.find("E1∘E0 = W·∇σ + Yσ");
  REQUIRE(comp);
  CHECK(comp->applicable);
  CHECK(comp->pass);
  const IdentityResult* c1 = r.find("C1∘E0 = ∇̃");
  REQUIRE(c1);
  CHECK_FALSE(c1->applicable);
  CHECK(c1->pass);
  CHECK(r.find("C1 invariance")->applicable == false);
  CHECK(r.find("Cotton tensor shift")->applicable);
  CHECK(r.all_pass());
}

TEST_CASE("identity suite passes on S2xS2 with the one-solution form") {
  const VerificationReport r = run_suite(request("identities", "s2xs2", 2, 2), Execution::Parallel);
  for (const auto& x : r.results) {
    INFO(x.name << " " << x.max_residual);
    CHECK(x.applicable);
    CHECK(x.pass);
  }
}

TEST_CASE("identity suite on a no-solution chart skips the one-solution form") {
  const VerificationReport r = run_suite(request("identities", "perturbed:3", 2, 1), Execution::Parallel);
  CHECK_FALSE(r.find("id - C1∘D1 = H'1∘d̃")->applicable);
  CHECK(r.find("C1∘D1 with obstruction terms")->applicable);
  CHECK(r.all_pass());
}

TEST_CASE("BGG compositions vanish on flat space only") {
  const VerificationReport f = run_suite(request("bgg-flat", "flat", 3, 2), Execution::Parallel);
  CHECK(f.results.size() == 3);
  CHECK(f.max_residual() < 1e-12);
  const VerificationReport c = run_suite(request("bgg-flat", "schwarzschild", 3, 2), Execution::Parallel);
  CHECK(c.max_residual() > 1e-3);
  CHECK_FALSE(c.all_pass());
}

TEST_CASE("precondition failures surface as exceptions") {
  CHECK_THROWS_AS(run_suite(request("onesol", "flat", 2, 1)), PreconditionError);
  CHECK_THROWS_AS(run_suite(request("nosol", "s2xs2", 2, 1)), PreconditionError);
  CHECK_THROWS_AS(run_suite(request("nope", "flat", 2, 1)), PreconditionError);
  CHECK_THROWS_AS(run_suite(request("identities", "nowhere", 2, 1)), PreconditionError);
}

TEST_CASE("config merging and report body") {
  RunConfig base;
  const RunConfig c = merge_config(base, nlohmann::json{{"suite", "np"}, {"points", 4}, {"seed", 9}});
  CHECK(c.suite == "np");
  CHECK(c.points == 4);
  CHECK(c.seed == 9);
  CHECK(c.trials == base.trials);
  CHECK_THROWS_AS(merge_config(base, nlohmann::json{{"point", 4}}), StructuralError);
  CHECK_THROWS_AS(merge_config(base, nlohmann::json{{"points", "many"}}), StructuralError);

  const VerificationReport r = run_suite(request("np", "", 2, 1));
  const nlohmann::json j = report_json(r, c, 0.5);
  CHECK(j["schema"] == 1);
  CHECK(j.contains("timing"));
  CHECK(report_body(j).find("timing") == std::string::npos);
  CHECK(j["identities"].size() == r.results.size());
}
