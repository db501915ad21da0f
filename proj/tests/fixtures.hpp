#pragma once

// Independent oracles and hand-built fixtures shared by the unit tests and
// the acceptance run.

#include <numeric>
#include <vector>

#include "congrua/cotangent.hpp"
#include "congrua/modsym.hpp"
#include "congrua/randalg.hpp"

namespace fixtures {

using congrua::Integer;

// q·∏(1 − q^n)^a (1 − q^(Mn))^b up to q^terms, as integers.
inline std::vector<Integer> eta_product(int a, long m, int b, std::size_t terms) {
  std::vector<Integer> s(terms + 1);
  s[1] = 1;  // the leading q
  auto times = [&](std::size_t step, int e) {
    for (int t = 0; t < e; ++t)
      for (std::size_t i = terms; i >= step; --i) s[i] -= s[i - step];
  };
  for (std::size_t n = 1; n <= terms; ++n) {
    times(n, a);
    if (static_cast<long>(n) * m <= static_cast<long>(terms)) times(n * static_cast<std::size_t>(m), b);
  }
  return s;
}

inline long legendre(long a, long q) {
  long r = 1;
  for (long e = 0; e < (q - 1) / 2; ++e) r = r * a % q;
  r = ((r % q) + q) % q;
  return r == q - 1 ? -1 : r;
}

// dim S_k(Γ₀(N)) from the genus formula; -1 if 12g comes out fractional.
inline long cusp_form_dimension(long n, int k) {
  long mu = n, nu2 = (n % 4 == 0) ? 0 : 1, nu3 = (n % 9 == 0) ? 0 : 1;
  for (long q = 2, m = n; m > 1; ++q) {
    if (m % q != 0) continue;
    mu = mu / q * (q + 1);
    nu2 *= (q == 2) ? 1 : 1 + legendre(-1, q);
    nu3 *= (q == 3) ? 1 : 1 + (q == 2 ? -1 : legendre(-3, q));
    while (m % q == 0) m /= q;
  }
  long cusps = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) {
      const long g = std::gcd(d, n / d);
      for (long u = 1; u <= g; ++u) cusps += std::gcd(u, g) == 1;
    }
  // 12g = 12 + μ − 3ν₂ − 4ν₃ − 6ν∞
  const long twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
  if (twelve_g % 12 != 0) return -1;
  const long g = twelve_g / 12;
  if (k == 2) return g;
  return (k - 1) * (g - 1) + (k / 2 - 1) * cusps + nu2 * (k / 4) + nu3 * (k / 3);
}

inline congrua::Rational trace(const congrua::Matrix& m) {
  congrua::Rational t = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

inline congrua::Polynomial var(std::size_t n, std::size_t i) { return congrua::Polynomial::variable(n, i); }

// Glued algebra {a ≡ b mod p^m} in the basis {1, x} with x = (0, p^m).
inline congrua::AlgebraPresentation glued_presentation(int m, congrua::Polynomial f0, unsigned long p) {
  const auto o = congrua::glued_order(m, p);
  const congrua::Polynomial f1 = var(1, 0) * var(1, 0) - var(1, 0) * congrua::p_power(p, m);
  return congrua::AlgebraPresentation{1, {std::move(f0), f1}, o.algebra(p), {{0, 1}}};
}

// Triple glue in the basis {1, x, y} with x = (0, p, 0), y = (0, 0, p).
inline congrua::AlgebraPresentation triple_presentation(unsigned long p) {
  const auto o = congrua::triple_glue_order(1, p);
  const auto X = var(2, 0), Y = var(2, 1);
  const congrua::Rational pr(p);
  return congrua::AlgebraPresentation{2, {X * X - X * pr, Y * Y - Y * pr, X * Y}, o.algebra(p),
                                      {{0, 1, 0}, {0, 0, 1}}};
}

}  // namespace fixtures
