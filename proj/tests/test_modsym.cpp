#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "congrua/modsym.hpp"
#include "congrua/qcache.hpp"
#include "fixtures.hpp"

using namespace congrua;

namespace {

using fixtures::eta_product;
using fixtures::trace;

long cusp_form_dimension(long n, int k) {
  const long d = fixtures::cusp_form_dimension(n, k);
  REQUIRE(d >= 0);
  return d;
}

}  // namespace

TEST_CASE("P1 and cusps") {
  for (long n : {1L, 2L, 11L, 12L, 36L, 100L}) {
    const P1List p1(n);
    long expected = n;
    for (long q = 2, m = n; m > 1; ++q)
      if (m % q == 0) {
        expected = expected / q * (q + 1);
        while (m % q == 0) m /= q;
      }
    CHECK(static_cast<long>(p1.size()) == expected);
    CHECK(p1.index(0, 1) >= 0);
    // Every class is met as g∞ or g0 for lifts g of P¹ elements.
    CuspClasses cc(n);
    for (std::size_t i = 0; i < p1.size(); ++i) {
      const auto [c, d] = p1.element(i);
      const Mat2 g = lift_to_sl2(c, d, n);
      CHECK(g.a * g.d - g.b * g.c == 1);
      CHECK(p1.index(g.c, g.d) == static_cast<long>(i));
      cc.index(g.a, g.c);
      cc.index(g.b, g.d);
    }
    CHECK(cc.size() == cusp_count(n));
  }
}

TEST_CASE("dimension formula") {
  CHECK(build_space(11, 2)->cuspidal_dimension() == 2);
  CHECK(build_space(1, 2)->cuspidal_dimension() == 0);
  CHECK(build_space(1, 12)->cuspidal_dimension() == 2);
  for (long n = 1; n <= 40; ++n)
    for (int k : {2, 4, 6}) {
      CAPTURE(n);
      CAPTURE(k);
      const auto s = build_space(n, k);
      CHECK(static_cast<long>(s->cuspidal_dimension()) == 2 * cusp_form_dimension(n, k));
    }
}

TEST_CASE("hecke operators against eta products") {
  SUBCASE("level 11 weight 2") {
    const auto s = build_space(11, 2);
    const auto q = eta_product(2, 11, 2, 30);
    const auto lat = z_kernel(s->boundary());
    for (long ell : primes_up_to(20)) {
      if (ell == 11) continue;
      CAPTURE(ell);
      const Matrix t = restrict_to(s->hecke(ell), lat);
      CHECK(trace(t) == Rational(2 * q[ell]));
    }
    CHECK(trace(restrict_to(s->hecke(2), lat)) == -4);
  }
  SUBCASE("level 1 weight 12") {
    const auto s = build_space(1, 12);
    const auto delta = eta_product(24, 1, 0, 20);
    CHECK(delta[2] == -24);
    const auto lat = z_kernel(s->boundary());
    for (long ell : primes_up_to(20)) {
      CAPTURE(ell);
      CHECK(trace(restrict_to(s->hecke(ell), lat)) == Rational(2 * delta[ell]));
    }
  }
}

TEST_CASE("hecke structure") {
  for (auto [n, k] : {std::pair{11L, 2}, {37L, 2}, {23L, 4}, {12L, 6}}) {
    CAPTURE(n);
    const auto s = build_space(n, k);
    const Matrix& t2 = s->hecke(2);
    const Matrix& t3 = s->hecke(3);
    CHECK(t2 * t3 == t3 * t2);
    CHECK(s->star() * s->star() == Matrix::identity(s->dimension()));
    CHECK(s->star() * t3 == t3 * s->star());
    for (long ell : {5L, 7L})
      if (n % ell != 0) CHECK(s->hecke(ell) == s->hecke_merel(ell));
    // The boundary is Hecke-equivariant up to the action on cusps, so
    // the cuspidal subspace is stable.
    const auto cusp = z_kernel(s->boundary());
    CHECK_NOTHROW(restrict_to(t2, cusp));
    CHECK_NOTHROW(restrict_to(s->star(), cusp));
  }
}

TEST_CASE("integer lattices") {
  const Matrix a{{2, 4, 6}, {0, 3, 3}};
  const auto k = z_kernel(a);
  REQUIRE(k.size() == 1);
  CHECK((k[0] == Vector{-1, -1, 1} || k[0] == Vector{1, 1, -1}));
  const auto b = z_lattice_basis({{2, 0}, {0, 2}, {1, 1}}, 2);
  REQUIRE(b.size() == 2);
  CHECK(b[0][0] * b[1][1] - b[0][1] * b[1][0] == 2);
}

TEST_CASE("rational eigensystems") {
  SUBCASE("level 11") {
    const auto s = build_space(11, 2);
    const auto es = rational_eigensystems(s);
    REQUIRE(es.forms.size() == 1);
    const auto& f = es.forms[0];
    CHECK(f.newform());
    CHECK(f.label == "11.2.a");
    const auto q = eta_product(2, 11, 2, 60);
    const auto a = q_expansion(*s, f, 60);
    for (std::size_t n = 1; n <= 60; ++n) {
      CAPTURE(n);
      CHECK(a[n] == q[n]);
    }
    CHECK(dot(f.phi_plus, f.delta_plus) != 0);
    CHECK(dot(f.phi_plus, s->star() * f.delta_minus) == 0);
    CHECK(s->star().transpose() * f.phi_minus == scale(f.phi_minus, -1));
  }
  SUBCASE("level 1 weight 12") {
    const auto s = build_space(1, 12);
    const auto es = rational_eigensystems(s);
    REQUIRE(es.forms.size() == 1);
    const auto delta = eta_product(24, 1, 0, 30);
    const auto a = q_expansion(*s, es.forms[0], 30);
    for (std::size_t n = 1; n <= 30; ++n) CHECK(a[n] == delta[n]);
  }
  SUBCASE("level 37 has two rational newforms") {
    const auto es = rational_eigensystems(build_space(37, 2));
    REQUIRE(es.forms.size() == 2);
    CHECK(es.forms[0].a.at(2) == -2);
    CHECK(es.forms[1].a.at(2) == 0);
    CHECK(es.irrational_dimension == 0);
  }
  SUBCASE("old forms at level 33") {
    const auto es = rational_eigensystems(build_space(33, 2));
    std::size_t old = 0, fresh = 0;
    for (const auto& f : es.forms) (f.newform() ? fresh : old) += 1;
    CHECK(fresh == 1);
    CHECK(old == 1);
  }
  SUBCASE("irrational eigenvalues at level 23") {
    const auto es = rational_eigensystems(build_space(23, 2));
    CHECK(es.forms.empty());
    CHECK(es.irrational_dimension == 2);
  }
}

TEST_CASE("localization and congruence numbers") {
  const auto es11 = rational_eigensystems(build_space(11, 2));
  const auto& f = es11.forms[0];
  SUBCASE("single newform at p = 3") {
    const auto l = localize_at_eigenform(es11, f, 3);
    CHECK(l.algebra.rank() == 1);
    CHECK(l.members.size() == 1);
    CHECK(congruence_number(l) == PIdeal::unit());
    CHECK(cohomological_congruence_number(l) == PIdeal::unit());
    CHECK(verify_freeness(l));
  }
  SUBCASE("Eisenstein at p = 5") {
    CHECK(is_eisenstein_mod(f, 5));
    try {
      localize_at_eigenform(es11, f, 5);
      FAIL("expected EisensteinIdeal");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EisensteinIdeal);
    }
  }
  SUBCASE("Ramanujan congruence") {
    const auto es = rational_eigensystems(build_space(1, 12));
    CHECK(is_eisenstein_mod(es.forms[0], 691));
    CHECK_FALSE(is_eisenstein_mod(es.forms[0], 7));
  }
  SUBCASE("standing hypotheses") {
    CHECK_THROWS_AS(localize_at_eigenform(es11, f, 11), Error);
    CHECK_THROWS_AS(localize_at_eigenform(es11, f, 2), Error);
  }
}

TEST_CASE("a congruent pair of newforms") {
  const auto es = rational_eigensystems(build_space(118, 2));
  const auto pairs = congruent_pairs(es, 3);
  REQUIRE(pairs.size() == 1);
  const auto& c = pairs[0];
  CHECK(c.f == "118.2.b");
  CHECK(c.g == "118.2.c");
  CHECK(c.eta == 1);
  CHECK(c.eta_coh == c.eta);
  CHECK(c.oracle == c.eta);
  CHECK(c.free);
  CHECK(congruent_pairs(es, 5).empty());
}

TEST_CASE("continued fraction paths") {
  const auto s = build_space(11, 2);
  const std::vector<Integer> one{1};
  // {∞, 0} = [1, (1:0)]
  CHECK(path_from_infinity(*s, one, 0, 1) == s->manin_symbol(one, 1, 0));
  // {∞, γ∞} is closed for γ ∈ Γ₀(11).
  for (auto [a, c] : {std::pair{1L, 11L}, {3L, 11L}, {-5L, 22L}, {7L, 33L}})
    CHECK(is_zero(s->boundary() * path_from_infinity(*s, one, a, c)));
  // {∞, r + 1} = T{∞, r} with T = (1 1; 0 1) ∈ Γ₀(N).
  for (auto [u, v] : {std::pair{2L, 5L}, {-3L, 7L}, {13L, 4L}})
    CHECK(path_from_infinity(*s, one, u + v, v) == path_from_infinity(*s, one, u, v));
}

TEST_CASE("manin periods") {
  SUBCASE("level 11 against the lattice of X0(11)") {
    const auto s = build_space(11, 2);
    const auto es = rational_eigensystems(s);
    const auto& f = es.forms[0];
    const auto p = manin_periods(*s, f, 1e-12);
    CHECK(p.plus.imag() == 0);
    CHECK(p.minus.real() == 0);
    CHECK(p.residual < 1e-12);
    CHECK(p.error < 1e-12);
    // 2πi f(z)dz has real period 1.2692093042795... and the imaginary one
    // is 1.4588166169384...·i up to the factor 2 from the index of the
    // lattice of φ⁺.
    const double two_pi = 6.283185307179586;
    CHECK(std::abs(two_pi * std::abs(p.minus.imag()) - 1.26920930427955) < 1e-11);
    CHECK(std::abs(two_pi * std::abs(p.plus.real()) - 2 * 1.45881661693850) < 1e-11);
    // φ⁺ → 3φ⁺ divides Ω⁺ by 3 and leaves Ω⁻ alone.
    auto g = f;
    g.phi_plus = scale(g.phi_plus, 3);
    const auto q = manin_periods(*s, g, 1e-12);
    CHECK(std::abs(q.plus.real() * 3 - p.plus.real()) < 1e-14);
    CHECK(q.minus == p.minus);
  }
  SUBCASE("higher weight converges") {
    for (auto [n, k] : {std::pair{1L, 12}, {5L, 4}, {7L, 6}}) {
      CAPTURE(n);
      const auto s = build_space(n, k);
      const auto es = rational_eigensystems(s);
      const auto p = manin_periods(*s, es.forms[0], 1e-12);
      CHECK(p.residual < 1e-12);
      CHECK(p.error < 1e-12);
      CHECK(p.plus.real() != 0);
      CHECK(p.minus.imag() != 0);
    }
  }
}

TEST_CASE("q-expansion cache") {
  const auto s = build_space(1, 12);
  const auto es = rational_eigensystems(s);
  const auto& f = es.forms[0];
  const std::string path = "test_qcache.jsonl";
  std::remove(path.c_str());
  {
    QExpansionCache cache(path);
    const auto a = cache.get(*s, f, 40);
    CHECK(a[2] == -24);
    CHECK(cache.misses() == 1);
    CHECK(cache.get(*s, f, 30) == std::vector<Integer>(a.begin(), a.begin() + 31));
    CHECK(cache.hits() == 1);
  }
  // Entries beyond 64 bits round-trip as strings.
  {
    QExpansionCache cache(path);
    CHECK(cache.hits() == 0);
    std::vector<Integer> big{0, 1, Integer("-123456789012345678901234567890"), 5};
    cache.store(7, 4, "synthetic", big);
  }
  QExpansionCache reread(path);
  REQUIRE(reread.lookup(7, 4, "synthetic", 3));
  CHECK((*reread.lookup(7, 4, "synthetic", 3))[2] == Integer("-123456789012345678901234567890"));
  CHECK_FALSE(reread.lookup(7, 4, "synthetic", 4));
  const auto again = reread.get(*s, f, 40);
  CHECK(reread.hits() == 1);
  CHECK(again == q_expansion(*s, f, 40));
  // A corrupted entry that contradicts the known eigenvalues is ignored.
  auto bad = again;
  bad[2] = 24;
  reread.store(1, 12, f.label, std::vector<Integer>(bad.begin(), bad.end()));
  bad.push_back(0);
  reread.store(1, 12, f.label, bad);
  CHECK(reread.get(*s, f, 100)[2] == -24);
  std::remove(path.c_str());
}
