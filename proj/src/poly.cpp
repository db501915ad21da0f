#include "congrua/poly.hpp"

#include <sstream>

namespace congrua {

bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Monomial monomial_lcm(const Monomial& a, const Monomial& b) {
  Monomial m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::max(a[i], b[i]);
  return m;
}

Monomial monomial_quotient(const Monomial& b, const Monomial& a) {
  Monomial m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = b[i] - a[i];
  return m;
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[i] = 1;
  p.add_term(m, 1);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.size() != n_) throw Error(ErrorKind::InvalidArgument, "monomial has the wrong arity");
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Rational(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(n_);
  for (const auto& [a, x] : terms_)
    for (const auto& [b, y] : o.terms_) {
      Monomial m(n_);
      for (std::size_t i = 0; i < n_; ++i) m[i] = a[i] + b[i];
      r.add_term(m, x * y);
    }
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial r(n_);
  for (const auto& [m, x] : terms_) r.add_term(m, x * c);
  return r;
}

Rational Polynomial::evaluate(const Vector& point) const {
  Rational total = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < n_; ++i)
      for (int e = 0; e < m[i]; ++e) t *= point[i];
    total += t;
  }
  return total;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << c.get_str();
    for (std::size_t i = 0; i < n_; ++i)
      if (m[i] > 0) out << "*x" << i << (m[i] > 1 ? "^" + std::to_string(m[i]) : "");
  }
  return out.str();
}

Polynomial power(const Polynomial& f, int e) {
  Polynomial r = Polynomial::constant(f.num_vars(), 1);
  for (int i = 0; i < e; ++i) r = r * f;
  return r;
}

PrimeField::Value PrimeField::from(const Rational& x) const {
  const Integer mod(static_cast<unsigned long>(p));
  Integer den = x.get_den() % mod;
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "coefficient is not p-integral");
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  Integer v = (x.get_num() * inv) % mod;
  if (v < 0) v += mod;
  return v.get_si();
}

PrimeField::Value PrimeField::div(Value a, Value b) const {
  Integer inv;
  const Integer mod(static_cast<unsigned long>(p)), bb(b);
  if (mpz_invert(inv.get_mpz_t(), bb.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw Error(ErrorKind::InvalidArgument, "division by zero in F_p");
  return mul(a, inv.get_si());
}

}  // namespace congrua
