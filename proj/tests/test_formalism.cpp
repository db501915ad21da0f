#include "doctest.h"

#include "congrua/formalism.hpp"

using namespace congrua;

TEST_CASE("vacuous run") {
  FormalismOptions o;
  o.count = 0;
  const auto r = run_formalism_suites(o);
  CHECK(r.ok());
  CHECK(r.suites.size() == formalism_suites().size());
}

TEST_CASE("suites pass and are reproducible") {
  FormalismOptions o;
  o.seed = 7;
  o.count = 12;
  const auto a = run_formalism_suites(o);
  CHECK(a.ok());
  for (const auto& [suite, fams] : a.suites)
    for (const auto& [fam, c] : fams) CHECK(c.passed == 12);
  CHECK(to_json(a).dump() == to_json(run_formalism_suites(o)).dump());
  o.seed = 8;
  CHECK(instance_seed(7, AlgebraFamily::TripleGlue, 3) != instance_seed(8, AlgebraFamily::TripleGlue, 3));
}

TEST_CASE("corrupted instances are caught") {
  FormalismOptions o;
  o.count = 3;
  o.tamper = [](RandomInstance& inst) {
    // A character that is not multiplicative, and a θ that is not unital.
    inst.lambda.values = scale(inst.lambda.values, 2);
    inst.datum.theta(0, 0) += 1;
  };
  const auto r = run_formalism_suites(o);
  CHECK_FALSE(r.ok());
  REQUIRE_FALSE(r.counterexamples.empty());
  const auto& c = r.counterexamples.front();
  CHECK(c.contains("suite"));
  CHECK(c.contains("instance_seed"));
}
