#include "doctest.h"

#include "congrua/finalg.hpp"
#include "congrua/randalg.hpp"

using namespace congrua;

namespace {

constexpr unsigned long kP = 5;

BaseChangeDatum glued_onto_o(int m) {
  return order_datum(glued_order(m, kP), split_order(1), Matrix{{1, 0}}, 0, kP);
}

// O[x]/(x² − p^m x) written down directly in the basis {1, x}.
FiniteFlatAlgebra glued_by_hand(int m) {
  std::vector<Rational> c(8);
  auto at = [&](int i, int j, int k) -> Rational& { return c[(i * 2 + j) * 2 + k]; };
  at(0, 0, 0) = 1;
  at(0, 1, 1) = at(1, 0, 1) = 1;
  at(1, 1, 1) = p_power(kP, m);
  return FiniteFlatAlgebra(2, c, {1, 0}, kP);
}

}  // namespace

TEST_CASE("algebra construction rejects bad data") {
  std::vector<Rational> c(8);
  c[0] = 1;  // e0·e0 = e0 only; e0·e1 = 0 breaks the unit
  CHECK_THROWS_AS(FiniteFlatAlgebra(2, c, {1, 0}, kP), Error);
  const auto t = glued_by_hand(1);
  CHECK_THROWS_AS(validate_character(t, Character{{1, 1}}), Error);
  CHECK_NOTHROW(validate_character(t, Character{{1, 0}}));
  CHECK_NOTHROW(validate_character(t, Character{{1, 5}}));
}

TEST_CASE("idempotents") {
  SUBCASE("split") {
    const auto t = FiniteFlatAlgebra::split(2, kP);
    CHECK(idempotent_for_character(t, Character{{1, 0}}) == Vector{1, 0});
  }
  SUBCASE("rank one") {
    const auto t = FiniteFlatAlgebra::split(1, kP);
    CHECK(idempotent_for_character(t, Character{{1}}) == Vector{1});
  }
  SUBCASE("glued") {
    for (int m = 1; m <= 3; ++m) {
      const auto t = glued_by_hand(m);
      const Vector e = idempotent_for_character(t, Character{{1, 0}});
      CHECK(t.multiply(e, e) == e);
      CHECK(e == Vector{Rational(1), -1 / p_power(kP, m)});
      CHECK(-min_valuation(e, kP) == m);
    }
  }
  SUBCASE("nilpotent direction has no idempotent") {
    // O[ε]/ε² is not reduced.
    std::vector<Rational> c(8);
    c[0] = 1;
    c[(0 * 2 + 1) * 2 + 1] = c[(1 * 2 + 0) * 2 + 1] = 1;
    const FiniteFlatAlgebra t(2, c, {1, 0}, kP);
    CHECK_THROWS_AS(idempotent_for_character(t, Character{{1, 0}}), Error);
  }
}

TEST_CASE("monogenic glue matches the hand-written algebra") {
  for (int m = 1; m <= 3; ++m) {
    const auto a = monogenic_order({Rational(0), p_power(kP, m)}).algebra(kP);
    CHECK(a.constants() == glued_by_hand(m).constants());
    CHECK(a.unit() == glued_by_hand(m).unit());
  }
}

TEST_CASE("eta") {
  CHECK(eta(FiniteFlatAlgebra::split(2, kP), Character{{1, 0}}) == PIdeal::unit());
  for (int m = 1; m <= 3; ++m) {
    CHECK(eta(glued_by_hand(m), Character{{1, 0}}) == PIdeal::power(m));
    const auto tri = triple_glue_order(m, kP);
    CHECK(eta(tri.algebra(kP), tri.projection(0)) == PIdeal::power(m));
  }
}

TEST_CASE("c0 module") {
  const unsigned long p = kP;
  SUBCASE("regular module of the glued algebra") {
    for (int m = 1; m <= 3; ++m) {
      const auto t = glued_by_hand(m);
      const auto c0 = c0_module(t, regular_module(t), Character{{1, 0}});
      CHECK(c0.elementary_divisors() == std::vector<int>{m});
      CHECK(fitting_ideal(c0) == PIdeal::power(m));
      const auto twice = direct_sum(regular_module(t), regular_module(t));
      validate_module(t, twice);
      CHECK(eta_of_module(t, twice, Character{{1, 0}}) == PIdeal::power(2 * m));
    }
  }
  SUBCASE("rank one") {
    const auto t = FiniteFlatAlgebra::split(1, p);
    CHECK(c0_module(t, regular_module(t), Character{{1}}).length() == 0);
  }
}

TEST_CASE("duality transfer") {
  SUBCASE("trivial") {
    const auto t = FiniteFlatAlgebra::split(1, kP);
    const PerfectPairing pr{regular_module(t), regular_module(t), Matrix{{1}}};
    validate_pairing(t, pr);
    const auto r = duality_transfer(t, pr, Character{{1}});
    CHECK(r.holds());
    CHECK(r.left == PIdeal::unit());
  }
  SUBCASE("glued with a trace-like pairing") {
    for (int m = 1; m <= 3; ++m) {
      const auto t = glued_by_hand(m);
      const auto g = gorenstein_check(t, 0);
      REQUIRE(g.verdict == GorensteinVerdict::Gorenstein);
      const PerfectPairing pr{regular_module(t), regular_module(t), gorenstein_gram(t, *g.generator)};
      validate_pairing(t, pr);
      const auto r = duality_transfer(t, pr, Character{{1, 0}});
      CHECK(r.holds());
      CHECK(r.pairing == PIdeal::power(m));
    }
  }
}

TEST_CASE("eta sharp") {
  SUBCASE("identity") {
    const auto o = glued_order(2, kP);
    const auto d = order_datum(o, o, Matrix::identity(2), 0, kP);
    CHECK(eta_sharp(d) == PIdeal::unit());
  }
  SUBCASE("glued onto O") {
    for (int m = 1; m <= 3; ++m) CHECK(eta_sharp(glued_onto_o(m)) == PIdeal::power(m));
  }
  SUBCASE("split onto O") {
    const auto d = order_datum(split_order(2), split_order(1), Matrix{{1, 0}}, 0, kP);
    CHECK(eta_sharp(d) == PIdeal::unit());
  }
}

TEST_CASE("base change factorizations") {
  SUBCASE("trivial datum") {
    const auto d = order_datum(split_order(1), split_order(1), Matrix{{1}}, 0, kP);
    const auto r = check_bc_factorization(d, regular_module(d.source));
    CHECK(r.holds());
    CHECK(r.eta_lambda_prime == PIdeal::unit());
    CHECK(check_hida_factorization(d).holds());
  }
  SUBCASE("glued datum") {
    for (int m = 1; m <= 3; ++m) {
      const auto d = glued_onto_o(m);
      const auto r = check_bc_factorization(d, regular_module(d.source));
      CHECK(r.holds());
      CHECK(r.eta_lambda_prime == PIdeal::power(m));
      CHECK(r.eta_lambda_mt == PIdeal::unit());
      CHECK(r.eta_sharp == PIdeal::power(m));
      const auto h = check_hida_factorization(d);
      CHECK(h.equality_expected);
      CHECK(h.holds());
      CHECK(h.eta_lambda == PIdeal::unit());
    }
  }
}

TEST_CASE("gorenstein check") {
  const auto split = gorenstein_check(FiniteFlatAlgebra::split(2, kP), 0);
  CHECK(split.verdict == GorensteinVerdict::Gorenstein);
  const auto glued = glued_by_hand(2);
  const auto g = gorenstein_check(glued, 0);
  REQUIRE(g.verdict == GorensteinVerdict::Gorenstein);
  // φ = dual of x: Gram [[0,1],[1,p²]] has determinant −1.
  CHECK(*g.generator == Vector{0, 1});
  const auto tri = triple_glue_order(1, kP).algebra(kP);
  CHECK(gorenstein_check(tri, 200).verdict == GorensteinVerdict::Inconclusive);
}

TEST_CASE("linear base change") {
  for (int m = 1; m <= 3; ++m) {
    const auto d = glued_onto_o(m);
    const auto m_reg = regular_module(d.source);
    const auto delta = lambda_part(d.source, m_reg, d.lambda_prime());
    REQUIRE(delta.size() == 1);
    // Φ spans the θ-part of the dual.
    const Matrix e_theta = dual_module(m_reg).action_of(theta_idempotent(d));
    const auto phis = saturate(e_theta.columns(), 2, kP);
    REQUIRE(phis.size() == 1);
    const auto r = check_linear_bc(d, m_reg, phis[0], delta[0]);
    CHECK(r.holds());
    CHECK(r.eta_sharp_dual == PIdeal::power(m));
    CHECK(r.phi_delta_valuation == m);
    CHECK(check_linear_bc(d, m_reg, Vector(2), delta[0]).holds());
    CHECK_THROWS_AS(check_linear_bc(d, m_reg, Vector{0, 1}, delta[0]), Error);
  }
}

TEST_CASE("json round trip") {
  const auto inst = random_algebra({AlgebraFamily::FiberProduct, 3, 4, 2}, 17);
  const auto j = to_json(inst.datum);
  const auto back = datum_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.source.constants() == inst.datum.source.constants());
  CHECK(character_from_json(to_json(inst.lambda)).values == inst.lambda.values);
}

TEST_CASE("properties over random families") {
  for (auto family : kAllFamilies) {
    for (unsigned long p : {3ul, 5ul}) {
      for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        CAPTURE(to_string(family));
        CAPTURE(seed);
        const auto inst = random_algebra({family, p, 4, 2}, seed);
        const auto& t = inst.algebra;
        const auto reg = regular_module(t);
        const PIdeal n = eta(t, inst.lambda);
        CHECK(n == eta_of_module(t, reg, inst.lambda));
        // η is the exact denominator of e_λ.
        CHECK(-min_valuation(idempotent_for_character(t, inst.lambda), p) == n.valuation());
        const auto dual = dual_module(reg);
        CHECK(eta_of_module(t, dual, inst.lambda) == n);
        const PerfectPairing pr{reg, dual, Matrix::identity(t.rank())};
        validate_pairing(t, pr);
        CHECK(duality_transfer(t, pr, inst.lambda).holds());
        CHECK(check_bc_factorization(inst.datum, reg).holds());
        CHECK(check_bc_factorization(inst.datum, direct_sum(reg, dual)).holds());
        CHECK(check_hida_factorization(inst.datum).holds());
      }
    }
  }
}
