#include <random>
#include <set>
#include <utility>

#include "doctest.h"

#include "congrua/dvr.hpp"

using namespace congrua;

namespace {

// Determinant by fraction-free elimination over Q; independent of snf().
Rational det(Matrix a) {
  const std::size_t n = a.rows();
  Rational d = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t sel = k;
    while (sel < n && a(sel, k) == 0) ++sel;
    if (sel == n) return 0;
    if (sel != k) {
      a.swap_rows(sel, k);
      d = -d;
    }
    d *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

// Order of Z^n / (column lattice + p^e Z^n) by enumerating the subgroup of
// (Z/p^e)^n generated by the columns.
long cokernel_order_mod(const std::vector<std::vector<long>>& cols, long n, long modulus) {
  std::set<std::vector<long>> seen;
  std::vector<std::vector<long>> frontier{std::vector<long>(n, 0)};
  seen.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<std::vector<long>> next;
    for (const auto& x : frontier)
      for (const auto& c : cols) {
        auto y = x;
        for (long i = 0; i < n; ++i) y[i] = ((y[i] + c[i]) % modulus + modulus) % modulus;
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  long total = 1;
  for (long i = 0; i < n; ++i) total *= modulus;
  return total / static_cast<long>(seen.size());
}

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long bound) {
  std::uniform_int_distribution<long> d(-bound, bound);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

Matrix random_unimodular(std::mt19937_64& rng, std::size_t n, unsigned long p) {
  for (;;) {
    Matrix m = random_matrix(rng, n, n, 4);
    if (is_p_unit(det(m), p)) return m;
  }
}

bool is_diagonal(const Matrix& d) {
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (i != j && d(i, j) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("valuations and ideals") {
  CHECK(valuation(Rational(75), 5) == 2);
  CHECK(valuation(Rational(3, 25), 5) == -2);
  CHECK(valuation(Rational(0), 5) == kInfiniteValuation);
  CHECK(is_p_integral(Rational(3, 7), 5));
  CHECK_FALSE(is_p_integral(Rational(3, 10), 5));

  const auto a = PIdeal::power(2), b = PIdeal::power(3);
  CHECK((a * b).valuation() == 5);
  CHECK((a * PIdeal::zero()).is_zero());
  CHECK(a.contains(b));
  CHECK_FALSE(b.contains(a));
  CHECK(a.contains(PIdeal::zero()));
  CHECK_THROWS_AS(PIdeal::zero().valuation(), Error);
}

TEST_CASE("snf examples") {
  const unsigned long p = 5;
  SUBCASE("identity") {
    const auto s = snf(Matrix{{1, 0}, {0, 1}}, p);
    CHECK(s.D == Matrix{{1, 0}, {0, 1}});
  }
  SUBCASE("already diagonal") {
    const auto s = snf(Matrix{{5, 0}, {0, 25}}, p);
    CHECK(s.diagonal_valuations == std::vector<int>{1, 2});
  }
  SUBCASE("mixed") {
    const Matrix a{{2, 5}, {5, 25}};
    // Oracle: the first divisor is the minimal entry valuation, the sum is
    // v(det) computed by plain elimination.
    int first = kInfiniteValuation;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) first = std::min(first, valuation(a(i, j), p));
    const int total = valuation(det(a), p);
    CHECK(first == 0);
    CHECK(total == 2);
    const auto s = snf(a, p);
    CHECK(s.diagonal_valuations == std::vector<int>{first, total - first});
    CHECK(s.U * a * s.V == s.D);
  }
}

TEST_CASE("snf invariants on random matrices") {
  std::mt19937_64 rng(7);
  for (unsigned long p : {3ul, 5ul, 7ul}) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
      Matrix a = random_matrix(rng, r, c, 30);
      if (trial % 3 == 0)
        for (std::size_t j = 0; j < c; ++j) a(0, j) *= static_cast<long>(p * p);
      const auto s = snf(a, p);
      CHECK(s.U * a * s.V == s.D);
      CHECK(is_diagonal(s.D));
      CHECK(is_p_unit(det(s.U), p));
      CHECK(is_p_unit(det(s.V), p));
      CHECK(s.U.is_p_integral(p));
      CHECK(s.V.is_p_integral(p));
      for (std::size_t i = 1; i < s.diagonal_valuations.size(); ++i)
        CHECK(s.diagonal_valuations[i - 1] <= s.diagonal_valuations[i]);
    }
  }
}

TEST_CASE("fitting ideals") {
  const unsigned long p = 3;
  SUBCASE("direct sum of cyclics") {
    const auto m = FiniteModulePresentation::direct_sum(FiniteModulePresentation::cyclic(1, p),
                                                        FiniteModulePresentation::cyclic(2, p));
    CHECK(fitting_ideal(m) == PIdeal::power(3));
  }
  SUBCASE("zero module") {
    CHECK(fitting_ideal(FiniteModulePresentation::zero_module(p)) == PIdeal::unit());
  }
  SUBCASE("cokernel against enumeration") {
    // Columns (p,0) and (1,p); cokernel counted exhaustively modulo p^3.
    const long pl = static_cast<long>(p);
    const long order = cokernel_order_mod({{pl, 0}, {1, pl}}, 2, pl * pl * pl);
    int expected = 0;
    for (long o = order; o > 1; o /= pl) ++expected;
    CHECK(expected == 2);
    const FiniteModulePresentation m(2, Matrix{{3, 1}, {0, 3}}, p);
    CHECK(fitting_ideal(m) == PIdeal::power(expected));
    CHECK(m.elementary_divisors() == std::vector<int>{2});
  }
  SUBCASE("not finite") {
    const FiniteModulePresentation m(2, Matrix{{3}, {0}}, p);
    CHECK_FALSE(m.is_finite());
    CHECK_THROWS_AS(fitting_ideal(m), Error);
  }
}

TEST_CASE("fitting ideal agrees with enumeration and is invariant under unimodular change") {
  std::mt19937_64 rng(11);
  for (unsigned long p : {3ul, 5ul}) {
    const long pl = static_cast<long>(p);
    int tested = 0;
    while (tested < 25) {
      std::uniform_int_distribution<long> d(-12, 12);
      std::vector<std::vector<long>> cols(2, std::vector<long>(2));
      for (auto& c : cols)
        for (auto& x : c) x = d(rng);
      const Matrix rel{{cols[0][0], cols[1][0]}, {cols[0][1], cols[1][1]}};
      const Rational dt = det(rel);
      if (dt == 0 || valuation(dt, p) > 3) continue;
      ++tested;
      const FiniteModulePresentation m(2, rel, p);
      const long modulus = pl * pl * pl * pl;
      long order = cokernel_order_mod(cols, 2, modulus);
      int len = 0;
      for (; order > 1; order /= pl) ++len;
      CHECK(fitting_ideal(m) == PIdeal::power(len));
      const Matrix conj = random_unimodular(rng, 2, p) * rel * random_unimodular(rng, 2, p);
      CHECK(fitting_ideal(FiniteModulePresentation(2, conj, p)) == fitting_ideal(m));
    }
  }
}

TEST_CASE("saturate") {
  const unsigned long p = 5;
  SUBCASE("divide by content") {
    const auto b = saturate({{Rational(5), Rational(0)}}, 2, p);
    REQUIRE(b.size() == 1);
    CHECK(min_valuation(b[0], p) == 0);
    CHECK(b[0][1] == 0);
  }
  SUBCASE("unit determinant spans everything") {
    const auto b = saturate({{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}}, 2, p);
    CHECK(b.size() == 2);
    CHECK(is_p_unit(det(Matrix::from_rows(b, 2)), p));
  }
  SUBCASE("content extraction") {
    const auto b = saturate({{Rational(5), Rational(25)}}, 2, p);
    REQUIRE(b.size() == 1);
    CHECK(b[0][1] / b[0][0] == 5);
    CHECK(is_p_unit(b[0][0], p));
  }
  SUBCASE("idempotence and containment") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
      const Matrix a = random_matrix(rng, 2, 4, 10).scaled(25);
      std::vector<Vector> rows{a.row(0), a.row(1)};
      const auto s1 = saturate(rows, 4, p);
      const auto s2 = saturate(s1, 4, p);
      CHECK(s1.size() == s2.size());
      // same lattice: each basis expresses the other integrally
      for (const auto& v : s1) {
        auto c = coordinates(s2, v);
        for (auto& x : c) CHECK(is_p_integral(x, p));
      }
      for (const auto& v : rows) {
        auto c = coordinates(s1, v);
        for (auto& x : c) CHECK(is_p_integral(x, p));
      }
      CHECK(quotient_presentation(s1, rows, 4, p).is_finite());
    }
  }
}

TEST_CASE("solve_linear") {
  SUBCASE("identity") {
    const Vector b{Rational(3), Rational(-2, 7)};
    CHECK(*solve_linear(Matrix::identity(2), b) == b);
  }
  SUBCASE("non-integral solution") {
    const auto x = solve_linear(Matrix{{5}}, Vector{Rational(1)});
    REQUIRE(x);
    CHECK((*x)[0] == Rational(1, 5));
    CHECK_FALSE(is_p_integral((*x)[0], 5));
  }
  SUBCASE("inconsistent") {
    CHECK_FALSE(solve_linear(Matrix{{1, 1}, {1, 1}}, Vector{Rational(0), Rational(1)}));
  }
  SUBCASE("random residual") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
      Matrix a = random_matrix(rng, 5, 5, 9);
      if (det(a) == 0) continue;
      const Vector b = random_matrix(rng, 5, 1, 9).column(0);
      const auto x = solve_linear(a, b);
      REQUIRE(x);
      CHECK(a * *x == b);
    }
  }
}
