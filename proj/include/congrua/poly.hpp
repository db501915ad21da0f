#pragma once

// Sparse multivariate polynomials and a small Buchberger implementation,
// generic over the coefficient field so the same code runs over Q and F_p.
// Only meant for a handful of variables.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "congrua/dvr.hpp"

namespace congrua {

using Monomial = std::vector<int>;

// Graded reverse lexicographic order, largest first.
struct GrevlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = 0, db = 0;
    for (int x : a) da += x;
    for (int x : b) db += x;
    if (da != db) return da > db;
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

bool divides(const Monomial& a, const Monomial& b);
Monomial monomial_lcm(const Monomial& a, const Monomial& b);
Monomial monomial_quotient(const Monomial& b, const Monomial& a);

template <class V>
using Terms = std::map<Monomial, V, GrevlexGreater>;

class Polynomial {
 public:
  explicit Polynomial(std::size_t nvars = 0) : n_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);

  std::size_t num_vars() const { return n_; }
  const Terms<Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const Monomial& m, const Rational& c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  Rational evaluate(const Vector& point) const;
  std::string to_string() const;

 private:
  std::size_t n_;
  Terms<Rational> terms_;
};

Polynomial power(const Polynomial& f, int e);

// ---------------------------------------------------------------- fields

struct RationalField {
  using Value = Rational;
  Value from(const Rational& x) const { return x; }
  bool is_zero(const Value& x) const { return x == 0; }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value div(const Value& a, const Value& b) const { return a / b; }
};

struct PrimeField {
  using Value = long;
  unsigned long p;
  Value from(const Rational& x) const;
  bool is_zero(Value x) const { return x == 0; }
  Value add(Value a, Value b) const { return static_cast<Value>((a + b) % static_cast<long>(p)); }
  Value sub(Value a, Value b) const {
    return static_cast<Value>(((a - b) % static_cast<long>(p) + static_cast<long>(p)) % static_cast<long>(p));
  }
  Value mul(Value a, Value b) const { return static_cast<Value>((a * b) % static_cast<long>(p)); }
  Value div(Value a, Value b) const;
};

// ---------------------------------------------------------------- Gröbner

template <class F>
struct FieldPoly {
  Terms<typename F::Value> terms;
  bool is_zero() const { return terms.empty(); }
  const Monomial& lead() const { return terms.begin()->first; }
};

template <class F>
FieldPoly<F> convert(const F& f, const Polynomial& p) {
  FieldPoly<F> out;
  for (const auto& [m, c] : p.terms()) {
    auto v = f.from(c);
    if (!f.is_zero(v)) out.terms.emplace(m, v);
  }
  return out;
}

template <class F>
void axpy(const F& f, FieldPoly<F>& acc, const typename F::Value& c, const Monomial& shift,
          const FieldPoly<F>& g) {
  for (const auto& [m, v] : g.terms) {
    Monomial mm = m;
    for (std::size_t i = 0; i < mm.size(); ++i) mm[i] += shift[i];
    auto it = acc.terms.find(mm);
    auto term = f.mul(c, v);
    if (it == acc.terms.end()) {
      acc.terms.emplace(std::move(mm), term);
    } else {
      it->second = f.add(it->second, term);
      if (f.is_zero(it->second)) acc.terms.erase(it);
    }
  }
}

// Full reduction of h modulo the list g.
template <class F>
FieldPoly<F> normal_form(const F& f, FieldPoly<F> h, const std::vector<FieldPoly<F>>& g) {
  FieldPoly<F> rem;
  while (!h.is_zero()) {
    const Monomial lm = h.lead();
    const auto lc = h.terms.begin()->second;
    bool reduced = false;
    for (const auto& gi : g) {
      if (gi.is_zero() || !divides(gi.lead(), lm)) continue;
      const auto c = f.sub(typename F::Value{}, f.div(lc, gi.terms.begin()->second));
      axpy(f, h, c, monomial_quotient(lm, gi.lead()), gi);
      reduced = true;
      break;
    }
    if (!reduced) {
      rem.terms.emplace(lm, lc);
      h.terms.erase(h.terms.begin());
    }
  }
  return rem;
}

template <class F>
FieldPoly<F> monic(const F& f, FieldPoly<F> p) {
  if (p.is_zero()) return p;
  const auto lc = p.terms.begin()->second;
  for (auto& [m, v] : p.terms) v = f.div(v, lc);
  return p;
}

// Reduced Gröbner basis in grevlex.
template <class F>
std::vector<FieldPoly<F>> groebner_basis(const F& f, const std::vector<FieldPoly<F>>& input) {
  std::vector<FieldPoly<F>> g;
  for (const auto& p : input)
    if (!p.is_zero()) g.push_back(monic(f, p));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
  while (!pairs.empty()) {
    const auto [i, j] = pairs.back();
    pairs.pop_back();
    const Monomial& a = g[i].lead();
    const Monomial& b = g[j].lead();
    const Monomial l = monomial_lcm(a, b);
    bool coprime = true;
    for (std::size_t k = 0; k < a.size(); ++k) coprime = coprime && (a[k] == 0 || b[k] == 0);
    if (coprime) continue;
    FieldPoly<F> s;
    axpy(f, s, f.from(1), monomial_quotient(l, a), g[i]);
    axpy(f, s, f.from(-1), monomial_quotient(l, b), g[j]);
    auto r = normal_form(f, s, g);
    if (r.is_zero()) continue;
    g.push_back(monic(f, r));
    for (std::size_t k = 0; k + 1 < g.size(); ++k) pairs.emplace_back(k, g.size() - 1);
  }
  // Minimalize, then inter-reduce.
  std::vector<FieldPoly<F>> minimal;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j || !divides(g[j].lead(), g[i].lead())) continue;
      redundant = g[j].lead() != g[i].lead() || j < i;
    }
    if (!redundant) minimal.push_back(g[i]);
  }
  std::vector<FieldPoly<F>> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<FieldPoly<F>> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    reduced.push_back(monic(f, normal_form(f, minimal[i], others)));
  }
  std::sort(reduced.begin(), reduced.end(), [](const auto& x, const auto& y) {
    return GrevlexGreater{}(x.lead(), y.lead());
  });
  return reduced;
}

// Standard monomials of a zero-dimensional ideal given by a Gröbner basis, in
// increasing grevlex order; nullopt when the quotient is infinite-dimensional
// or exceeds the limit.
template <class F>
std::optional<std::vector<Monomial>> standard_monomials(const std::vector<FieldPoly<F>>& g,
                                                        std::size_t nvars, std::size_t limit = 4096) {
  std::vector<int> bound(nvars, -1);
  for (const auto& p : g) {
    const Monomial& m = p.lead();
    int nonzero = 0;
    std::size_t var = 0;
    for (std::size_t i = 0; i < nvars; ++i)
      if (m[i] != 0) {
        ++nonzero;
        var = i;
      }
    if (nonzero == 0) return std::vector<Monomial>{};  // unit ideal
    if (nonzero == 1 && (bound[var] < 0 || m[var] < bound[var])) bound[var] = m[var];
  }
  for (int b : bound)
    if (b < 0) return std::nullopt;
  std::vector<Monomial> out;
  Monomial m(nvars, 0);
  while (true) {
    bool standard = true;
    for (const auto& p : g) standard = standard && !divides(p.lead(), m);
    if (standard) {
      out.push_back(m);
      if (out.size() > limit) return std::nullopt;
    }
    std::size_t i = 0;
    while (i < nvars && ++m[i] >= bound[i]) m[i++] = 0;
    if (i == nvars) break;
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return GrevlexGreater{}(b, a); });
  return out;
}

}  // namespace congrua
