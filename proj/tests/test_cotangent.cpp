#include "doctest.h"

#include "congrua/cotangent.hpp"
#include "congrua/randalg.hpp"
#include "fixtures.hpp"

using namespace congrua;

namespace {

constexpr unsigned long kP = 3;

Polynomial x(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }
Polynomial c(std::size_t n, const Rational& v) { return Polynomial::constant(n, v); }

AlgebraPresentation glued_presentation(int m, Polynomial f0) { return fixtures::glued_presentation(m, std::move(f0), kP); }
AlgebraPresentation triple_presentation() { return fixtures::triple_presentation(kP); }

}  // namespace

TEST_CASE("polynomials and groebner bases") {
  const auto X = x(2, 0), Y = x(2, 1);
  CHECK((X + Y) * (X - Y) == X * X - Y * Y);
  CHECK((X * X - Y).evaluate({2, 3}) == 1);
  const RationalField q;
  // Ideal (x² − y, xy − 1): the quotient has dimension 3 (points with x³ = 1).
  const auto g = groebner_basis(q, {convert(q, X * X - Y), convert(q, X * Y - c(2, 1))});
  const auto std = standard_monomials(g, 2);
  REQUIRE(std);
  CHECK(std->size() == 3);
  // Over F_3, x³ − 1 = (x − 1)³ still has a 3-dimensional quotient.
  const PrimeField f3{3};
  const auto g3 = groebner_basis(f3, {convert(f3, X * X - Y), convert(f3, X * Y - c(2, 1))});
  CHECK(standard_monomials(g3, 2)->size() == 3);
  // Not zero-dimensional.
  CHECK_FALSE(standard_monomials(groebner_basis(q, {convert(q, X * Y)}), 2));
}

TEST_CASE("c1 examples") {
  CHECK(c1(FiniteFlatAlgebra::split(1, kP), Character{{1}}).fitting == PIdeal::unit());
  for (int m = 1; m <= 3; ++m) {
    const auto o = glued_order(m, kP);
    const auto r = c1(o.algebra(kP), o.projection(0));
    CHECK(r.presentation.elementary_divisors() == std::vector<int>{m});
    const auto tri = triple_glue_order(m, kP);
    CHECK(c1(tri.algebra(kP), tri.projection(0)).fitting == PIdeal::power(2 * m));
  }
}

TEST_CASE("lci criterion and wiles defect") {
  const auto one = lci_criterion(FiniteFlatAlgebra::split(1, kP), Character{{1}});
  CHECK(one.verdict == LciVerdict::CompleteIntersection);
  CHECK(one.eta == PIdeal::unit());
  for (int m = 1; m <= 3; ++m) {
    const auto o = glued_order(m, kP);
    const auto r = lci_criterion(o.algebra(kP), o.projection(0));
    CHECK(r.verdict == LciVerdict::CompleteIntersection);
    CHECK(r.eta == PIdeal::power(m));
    CHECK(wiles_defect(o.algebra(kP), o.projection(0)) == PIdeal::unit());
  }
  const auto tri = triple_glue_order(1, kP);
  const auto r = lci_criterion(tri.algebra(kP), tri.projection(0));
  CHECK(r.verdict == LciVerdict::NotCI);
  CHECK(r.eta == PIdeal::power(1));
  CHECK(r.fitting_c1 == PIdeal::power(2));
  CHECK(wiles_defect(tri.algebra(kP), tri.projection(0)) == PIdeal::power(1));
}

TEST_CASE("defect through a presentation") {
  SUBCASE("glued algebra with a zero padding relation") {
    for (int m = 1; m <= 3; ++m) {
      const auto pres = glued_presentation(m, Polynomial(1));
      const auto lambda = glued_order(m, kP).projection(0);
      CHECK(defect_via_cotangent_complex(pres, lambda) == PIdeal::unit());
      CHECK(defect_via_cotangent_complex(pres, lambda) == wiles_defect(pres.target, lambda));
    }
  }
  SUBCASE("complete intersection presented redundantly") {
    const auto pres = glued_presentation(2, x(1, 0) * x(1, 0) - x(1, 0) * Rational(9));
    CHECK(defect_via_cotangent_complex(pres, glued_order(2, kP).projection(0)) == PIdeal::unit());
  }
  SUBCASE("triple glue") {
    const auto pres = triple_presentation();
    const auto lambda = triple_glue_order(1, kP).projection(0);
    const auto cover = find_ci_cover(pres, lambda);
    REQUIRE(cover);
    CHECK(cover->algebra.rank() == 4);
    CHECK(defect_via_cotangent_complex(pres, lambda) == PIdeal::power(1));
    CHECK(defect_via_cotangent_complex(pres, lambda) == wiles_defect(pres.target, lambda));
  }
  SUBCASE("a cover that needs recombination") {
    // (x² − px)(1 + x) is not local and x²(x − p) is not reduced; their
    // difference is the glued relation.
    const auto X = x(1, 0);
    const Polynomial f = X * X - X * Rational(kP);
    const auto o = glued_order(1, kP);
    const AlgebraPresentation pres{1, {f * (c(1, 1) + X), f * X}, o.algebra(kP), {{0, 1}}};
    const auto cover = find_ci_cover(pres, o.projection(0));
    REQUIRE(cover);
    CHECK(cover->algebra.rank() == 2);
    CHECK(defect_via_cotangent_complex(pres, o.projection(0)) == PIdeal::unit());
  }
  SUBCASE("no cover") {
    // The images generate, but every candidate T₀ fails to be reduced.
    const auto X = x(1, 0);
    const auto o = split_order(1);
    const AlgebraPresentation pres{1, {X * X, X * X * X}, o.algebra(kP), {{0}}};
    CHECK_THROWS_AS(defect_via_cotangent_complex(pres, o.projection(0)), Error);
  }
  SUBCASE("invalid presentations") {
    auto pres = triple_presentation();
    pres.relations.pop_back();
    CHECK_THROWS_AS(validate_presentation(pres), Error);
    auto bad = glued_presentation(1, x(1, 0));
    CHECK_THROWS_AS(validate_presentation(bad), Error);
  }
}

TEST_CASE("base change C1") {
  SUBCASE("trivial datum") {
    const auto d = order_datum(split_order(1), split_order(1), Matrix{{1}}, 0, kP);
    CHECK(c1_sharp(d).length() == 0);
    const auto r = check_c1_exact_sequence(d);
    CHECK(r.target_is_ci);
    CHECK(r.identity());
  }
  SUBCASE("glued datum") {
    for (int m = 1; m <= 3; ++m) {
      const auto d = order_datum(glued_order(m, kP), split_order(1), Matrix{{1, 0}}, 0, kP);
      CHECK(c1_sharp(d).elementary_divisors() == std::vector<int>{m});
      const auto r = check_c1_exact_sequence(d);
      CHECK(r.identity());
      CHECK(r.c1_source == PIdeal::power(m));
      CHECK(r.c1_target == PIdeal::unit());
    }
  }
}

TEST_CASE("properties over random families") {
  for (auto family : kAllFamilies) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      CAPTURE(to_string(family));
      CAPTURE(seed);
      const auto inst = random_algebra({family, kP, 4, 2}, seed);
      const auto r = lci_criterion(inst.algebra, inst.lambda);
      CHECK(r.fitting_c1.valuation() >= r.eta.valuation());
      if (family == AlgebraFamily::MonogenicGlue || family == AlgebraFamily::SplitProduct)
        CHECK(wiles_defect(inst.algebra, inst.lambda) == PIdeal::unit());
      if (family == AlgebraFamily::TripleGlue)
        CHECK(wiles_defect(inst.algebra, inst.lambda) != PIdeal::unit());
      const auto seq = check_c1_exact_sequence(inst.datum);
      CHECK(seq.holds());
    }
  }
}
