#include "congrua/randalg.hpp"

#include <random>

namespace congrua {

namespace {

Vector ones(std::size_t r) { return Vector(r, Rational(1)); }

Matrix coordinate_projection(std::size_t from, const std::vector<std::size_t>& keep) {
  Matrix pi(keep.size(), from);
  for (std::size_t i = 0; i < keep.size(); ++i) pi(i, keep[i]) = 1;
  return pi;
}

std::vector<std::size_t> first(std::size_t k) {
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = i;
  return out;
}

class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}
  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

// Distinct roots a_i ≡ a_1 mod p with random p-adic distances.
std::vector<Rational> glued_roots(Source& s, std::size_t n, unsigned long p, int max_exponent) {
  std::vector<Rational> roots{Rational(s.range(-2, 2))};
  while (roots.size() < n) {
    const long unit = s.range(1, static_cast<long>(p) - 1) * (s.range(0, 1) ? 1 : -1);
    Rational cand = roots[0] + p_power(p, static_cast<int>(s.range(1, max_exponent))) * unit;
    if (s.range(0, 1) && roots.size() > 1)
      cand = roots.back() + p_power(p, static_cast<int>(s.range(1, max_exponent))) * unit;
    bool fresh = true;
    for (const auto& r : roots) fresh = fresh && r != cand;
    if (fresh) roots.push_back(cand);
  }
  return roots;
}

// A small order usable as a factor: split or monogenic glue.
Order small_order(Source& s, std::size_t n, unsigned long p, int max_exponent) {
  if (n == 1 || s.range(0, 2) == 0) return split_order(n);
  return monogenic_order(glued_roots(s, n, p, max_exponent));
}

}  // namespace

Character Order::projection(std::size_t coordinate) const {
  Character c;
  for (const auto& b : basis) c.values.push_back(b[coordinate]);
  return c;
}

Order split_order(std::size_t n) {
  Order o{{}, n};
  for (std::size_t i = 0; i < n; ++i) {
    Vector v(n);
    v[i] = 1;
    o.basis.push_back(v);
  }
  return o;
}

Order monogenic_order(const std::vector<Rational>& roots) {
  const std::size_t n = roots.size();
  Order o{{}, n};
  Vector power = ones(n);
  for (std::size_t j = 0; j < n; ++j) {
    o.basis.push_back(power);
    for (std::size_t i = 0; i < n; ++i) power[i] *= roots[i];
  }
  return o;
}

Order glued_order(int m, unsigned long p) { return monogenic_order({Rational(0), p_power(p, m)}); }

Order triple_glue_order(int m, unsigned long p) {
  const Rational q = p_power(p, m);
  return Order{{ones(3), {0, q, 0}, {0, 0, q}}, 3};
}

Order fiber_product(const Order& a, std::size_t i, const Order& b, std::size_t j, int m,
                    unsigned long p) {
  const std::size_t r = a.ambient + b.ambient;
  auto embed = [&](const Vector& x, const Vector& y) {
    Vector v(r);
    for (std::size_t k = 0; k < a.ambient; ++k) v[k] = x[k];
    for (std::size_t k = 0; k < b.ambient; ++k) v[a.ambient + k] = y[k];
    return v;
  };
  const Vector zero_a(a.ambient), zero_b(b.ambient);
  std::vector<Vector> gens{ones(r), embed(zero_a, scale(ones(b.ambient), p_power(p, m)))};
  for (const auto& x : a.basis) gens.push_back(embed(sub(x, scale(ones(a.ambient), x[i])), zero_b));
  for (const auto& y : b.basis) gens.push_back(embed(zero_a, sub(y, scale(ones(b.ambient), y[j]))));
  return Order{lattice_basis(gens, r, p), r};
}

Order tensor_square(const Order& a) {
  const std::size_t r = a.ambient;
  Order o{{}, r * r};
  for (const auto& x : a.basis)
    for (const auto& y : a.basis) {
      Vector v(r * r);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) v[i * r + j] = x[i] * y[j];
      o.basis.push_back(std::move(v));
    }
  return o;
}

BaseChangeDatum order_datum(const Order& source, const Order& target, const Matrix& pi,
                            std::size_t coordinate, unsigned long p) {
  const std::size_t n = target.basis.size();
  Matrix theta(n, source.basis.size());
  for (std::size_t j = 0; j < source.basis.size(); ++j) {
    const Vector c = coordinates(target.basis, pi * source.basis[j]);
    for (std::size_t i = 0; i < n; ++i) theta(i, j) = c[i];
  }
  BaseChangeDatum d{source.algebra(p), target.algebra(p), theta, target.projection(coordinate)};
  validate_datum(d);
  return d;
}

std::string_view to_string(AlgebraFamily f) {
  switch (f) {
    case AlgebraFamily::SplitProduct: return "SplitProduct";
    case AlgebraFamily::MonogenicGlue: return "MonogenicGlue";
    case AlgebraFamily::FiberProduct: return "FiberProduct";
    case AlgebraFamily::TripleGlue: return "TripleGlue";
    case AlgebraFamily::TensorSquare: return "TensorSquare";
  }
  return "?";
}

RandomInstance random_algebra(const RandAlgSpec& spec, std::uint64_t seed) {
  Source s(seed);
  const unsigned long p = spec.p;
  const int e = std::max(1, spec.max_exponent);
  const auto max_rank = static_cast<long>(std::max(1, spec.max_rank));
  Order source, target;
  Matrix pi;
  switch (spec.family) {
    case AlgebraFamily::SplitProduct: {
      const auto n = static_cast<std::size_t>(s.range(1, max_rank));
      const auto k = static_cast<std::size_t>(s.range(1, static_cast<long>(n)));
      source = split_order(n);
      target = split_order(k);
      pi = coordinate_projection(n, first(k));
      break;
    }
    case AlgebraFamily::MonogenicGlue: {
      const auto n = static_cast<std::size_t>(s.range(std::min(2l, max_rank), max_rank));
      const auto roots = glued_roots(s, n, p, e);
      const auto k = static_cast<std::size_t>(s.range(1, static_cast<long>(n)));
      source = monogenic_order(roots);
      target = monogenic_order({roots.begin(), roots.begin() + static_cast<long>(k)});
      pi = coordinate_projection(n, first(k));
      break;
    }
    case AlgebraFamily::FiberProduct: {
      const long half = std::max(1l, max_rank / 2);
      const Order a = small_order(s, static_cast<std::size_t>(s.range(1, half)), p, e);
      const Order b = small_order(s, static_cast<std::size_t>(s.range(1, half)), p, e);
      const auto j = static_cast<std::size_t>(s.range(0, static_cast<long>(b.ambient) - 1));
      source = fiber_product(a, 0, b, j, static_cast<int>(s.range(1, e)), p);
      target = a;
      pi = coordinate_projection(source.ambient, first(a.ambient));
      break;
    }
    case AlgebraFamily::TripleGlue: {
      const int m = static_cast<int>(s.range(1, e));
      source = triple_glue_order(m, p);
      if (s.range(0, 1)) {
        target = glued_order(m, p);
        pi = coordinate_projection(3, {0, 1});
      } else {
        target = split_order(1);
        pi = coordinate_projection(3, {0});
      }
      break;
    }
    case AlgebraFamily::TensorSquare: {
      const auto n = static_cast<std::size_t>(s.range(1, std::min(3l, std::max(2l, max_rank / 2))));
      target = small_order(s, n, p, e);
      source = tensor_square(target);
      // Multiplication T ⊗ T → T on ambient coordinates: (i, i) ↦ i.
      pi = Matrix(n, n * n);
      for (std::size_t i = 0; i < n; ++i) pi(i, i * n + i) = 1;
      break;
    }
  }
  BaseChangeDatum d = order_datum(source, target, pi, 0, p);
  FiniteFlatAlgebra algebra = d.source;
  Character lambda = d.lambda_prime();
  return RandomInstance{std::move(source), std::move(algebra), std::move(lambda), std::move(d), seed};
}

}  // namespace congrua
