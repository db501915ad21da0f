#include <algorithm>
#include <optional>
#include <random>

#include "congrua/modsym.hpp"

namespace congrua {

namespace {

using ModMatrix = std::vector<std::vector<long>>;

long mod_p(const Rational& x, unsigned long p) {
  const Integer m(p);
  Integer den = x.get_den() % m, inv;
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "entry is not p-integral");
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  Integer v = (x.get_num() * inv) % m;
  if (v < 0) v += m;
  return v.get_si();
}

ModMatrix reduce(const Matrix& a, unsigned long p) {
  ModMatrix out(a.rows(), std::vector<long>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = mod_p(a(i, j), p);
  return out;
}

ModMatrix mul(const ModMatrix& a, const ModMatrix& b, long p) {
  const std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size();
  ModMatrix c(n, std::vector<long>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < m; ++j) c[i][j] = (c[i][j] + a[i][k] * b[k][j]) % p;
  return c;
}

std::size_t rank_mod(ModMatrix a, long p) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t col = 0; col < cols && r < a.size(); ++col) {
    std::size_t piv = r;
    while (piv < a.size() && a[piv][col] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[r], a[piv]);
    long inv = 1;
    for (long e = p - 2, b = a[r][col]; e > 0; e >>= 1, b = b * b % p)
      if (e & 1) inv = inv * b % p;
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      const long f = a[i][col] * inv % p;
      if (f == 0) continue;
      for (std::size_t j = col; j < cols; ++j) a[i][j] = ((a[i][j] - f * a[r][j]) % p + p) % p;
    }
    ++r;
  }
  return r;
}

// dim of the joint generalized eigenspace of T_ℓ for the residual a_ℓ.
std::size_t residual_dimension(const RationalEigensystems& es, const EigenformData& f, unsigned long p) {
  const std::size_t d = es.lattices.plus.size();
  const long pl = static_cast<long>(p);
  ModMatrix stacked;
  for (const auto& [ell, t] : es.plus_hecke) {
    const long a = mod_p(Rational(f.a.at(ell)), p);
    ModMatrix m = reduce(t, p);
    for (std::size_t i = 0; i < d; ++i) m[i][i] = ((m[i][i] - a) % pl + pl) % pl;
    ModMatrix power = m;
    for (std::size_t e = 1; e < d; ++e) power = mul(power, m, pl);
    stacked.insert(stacked.end(), power.begin(), power.end());
  }
  return d - rank_mod(stacked, pl);
}

bool congruent_mod(const EigenformData& f, const EigenformData& g, unsigned long p) {
  const Integer m(p);
  for (const auto& [ell, a] : f.a) {
    auto it = g.a.find(ell);
    if (it != g.a.end() && Integer(a - it->second) % m != 0) return false;
  }
  return true;
}

Vector flatten_product(const Vector& x, const Vector& y) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return out;
}

// The O-order generated by the given vectors inside the split algebra K^m.
std::vector<Vector> generated_order(std::vector<Vector> gens, std::size_t m, unsigned long p) {
  gens.push_back(Vector(m, 1));
  auto basis = lattice_basis(gens, m, p);
  while (true) {
    std::vector<Vector> next = basis;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i; j < basis.size(); ++j) next.push_back(flatten_product(basis[i], basis[j]));
    auto grown = lattice_basis(next, m, p);
    bool same = grown.size() == basis.size();
    if (same) {
      for (const auto& v : grown)
        if (min_valuation(coordinates(basis, v), p) < 0) same = false;
    }
    if (same) return basis;
    basis = std::move(grown);
  }
}

// Action of an element t ∈ T ⊂ K^m on a lattice, from the eigenvector
// decomposition: eig[g] lists eigenvectors (lattice coordinates) for member g.
Matrix action_on(const Vector& t, const std::vector<std::vector<Vector>>& eig, std::size_t n) {
  std::vector<Vector> cols, images;
  for (std::size_t g = 0; g < eig.size(); ++g)
    for (const auto& v : eig[g]) {
      cols.push_back(v);
      images.push_back(scale(v, t[g]));
    }
  const Matrix p = Matrix::from_columns(cols, n);
  const Matrix img = Matrix::from_columns(images, n);
  // A·P = img, solved column by column on the transpose.
  Matrix a(n, n);
  const Matrix pt = p.transpose();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = solve_linear(pt, img.row(i));
    if (!row) throw Error(ErrorKind::Degenerate, "eigenvectors do not span the block");
    for (std::size_t j = 0; j < n; ++j) a(i, j) = (*row)[j];
  }
  return a;
}

}  // namespace

bool is_eisenstein_mod(const EigenformData& f, unsigned long p) {
  const Integer m(p);
  Integer power;
  for (const auto& [ell, a] : f.a) {
    if (static_cast<unsigned long>(ell) == p) continue;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(ell), static_cast<unsigned long>(f.weight - 1));
    if (Integer(a - 1 - power) % m != 0) return false;
  }
  return true;
}

HeckeLattice localize_at_eigenform(const RationalEigensystems& es, const EigenformData& f, unsigned long p) {
  const long n = es.space->level();
  const int k = es.space->weight();
  if (p % 2 == 0 || p < 3) throw Error(ErrorKind::PreconditionFailed, "p must be an odd prime");
  if (n % static_cast<long>(p) == 0) throw Error(ErrorKind::PreconditionFailed, "p divides the level");
  if (static_cast<long>(p) <= k - 2) throw Error(ErrorKind::PreconditionFailed, "p ≤ k − 2");
  const auto self = std::find_if(es.forms.begin(), es.forms.end(),
                                 [&](const EigenformData& g) { return g.label == f.label; });
  if (self == es.forms.end() || !self->newform())
    throw Error(ErrorKind::BlockNotFound, f.label + " is not a rational newform of this space");
  if (is_eisenstein_mod(f, p)) throw Error(ErrorKind::EisensteinIdeal, f.label + " is Eisenstein mod " + std::to_string(p));

  std::vector<const EigenformData*> members;
  std::size_t rational_dim = 0;
  for (const auto& g : es.forms)
    if (congruent_mod(f, g, p)) {
      members.push_back(&g);
      rational_dim += g.multiplicity;
    }
  const std::size_t dres = residual_dimension(es, f, p);
  if (dres != rational_dim)
    throw Error(ErrorKind::Unsupported, "block of " + f.label + " mod " + std::to_string(p) +
                                            " contains non-rational eigensystems");

  const std::size_t m = members.size();
  std::vector<Vector> gens;
  for (const auto& [ell, a] : f.a) {
    Vector v(m);
    for (std::size_t g = 0; g < m; ++g) v[g] = members[g]->a.at(ell);
    gens.push_back(std::move(v));
  }
  const auto order = generated_order(gens, m, p);
  const auto fi = static_cast<std::size_t>(
      std::find_if(members.begin(), members.end(), [&](const EigenformData* g) { return g->label == f.label; }) -
      members.begin());
  Character lambda;
  for (const auto& b : order) lambda.values.push_back(b[fi]);

  auto side = [&](bool plus, std::vector<Vector>& ambient_basis) {
    const auto& lat = plus ? es.lattices.plus : es.lattices.minus;
    const std::size_t d = lat.size();
    std::vector<Vector> span;
    for (const auto* g : members)
      for (const auto& v : plus ? g->plus_space : g->minus_space) span.push_back(v);
    const auto basis = saturate(span, d, p);
    std::vector<std::vector<Vector>> eig;
    for (const auto* g : members) {
      eig.emplace_back();
      for (const auto& v : plus ? g->plus_space : g->minus_space) eig.back().push_back(coordinates(basis, v));
    }
    AlgebraModule mod{basis.size(), {}};
    for (const auto& t : order) {
      Matrix a = action_on(t, eig, basis.size());
      if (!a.is_p_integral(p)) throw Error(ErrorKind::Degenerate, "Hecke operator does not preserve the lattice");
      mod.action.push_back(std::move(a));
    }
    for (const auto& c : basis) {
      Vector v(es.space->dimension());
      for (std::size_t i = 0; i < d; ++i)
        if (c[i] != 0) v = add(v, scale(lat[i], c[i]));
      ambient_basis.push_back(std::move(v));
    }
    return mod;
  };
  std::vector<Vector> pb, mb;
  AlgebraModule plus = side(true, pb);
  AlgebraModule minus = side(false, mb);
  std::vector<std::string> labels;
  for (const auto* g : members) labels.push_back(g->label);
  HeckeLattice out{p, FiniteFlatAlgebra::suborder(order, p), lambda, std::move(plus), std::move(minus),
                   std::move(pb), std::move(mb), std::move(labels), dres};
  validate_module(out.algebra, out.plus);
  validate_module(out.algebra, out.minus);
  return out;
}

PIdeal congruence_number(const HeckeLattice& l) { return eta(l.algebra, l.lambda); }

PIdeal cohomological_congruence_number(const HeckeLattice& l) {
  const PIdeal plus = eta_of_module(l.algebra, l.plus, l.lambda);
  const PIdeal minus = eta_of_module(l.algebra, l.minus, l.lambda);
  if (plus != minus)
    throw Error(ErrorKind::PairingDegenerate,
                "C0(H^+) and C0(H^-) differ: " + plus.to_string() + " vs " + minus.to_string());
  return plus;
}

bool verify_freeness(const HeckeLattice& l) {
  const std::size_t r = l.algebra.rank();
  if (l.plus.rank != r) return false;
  auto generates = [&](const Vector& v) {
    std::vector<Vector> cols;
    for (const auto& a : l.plus.action) cols.push_back(a * v);
    const auto s = snf(Matrix::from_columns(cols, r), l.p);
    return s.rank == r && std::all_of(s.diagonal_valuations.begin(), s.diagonal_valuations.end(),
                                      [](int v) { return v == 0; });
  };
  for (std::size_t i = 0; i < r; ++i) {
    Vector e(r);
    e[i] = 1;
    if (generates(e)) return true;
  }
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 64; ++trial) {
    Vector v(r);
    for (auto& x : v) x = coef(rng);
    if (generates(v)) return true;
  }
  return false;
}

int sturm_congruence_exponent(const EigenformData& f, const EigenformData& g, unsigned long p) {
  int e = kInfiniteValuation;
  for (const auto& [ell, a] : f.a) {
    auto it = g.a.find(ell);
    if (it == g.a.end()) continue;
    e = std::min(e, valuation(Integer(a - it->second), p));
  }
  return e;
}

std::vector<CongruentPair> congruent_pairs(const RationalEigensystems& es, unsigned long p) {
  std::vector<CongruentPair> out;
  const long n = es.space->level();
  if (n % static_cast<long>(p) == 0 || static_cast<long>(p) <= es.space->weight() - 2) return out;
  for (std::size_t i = 0; i < es.forms.size(); ++i) {
    const auto& f = es.forms[i];
    if (!f.newform() || is_eisenstein_mod(f, p)) continue;
    std::vector<std::size_t> block;
    for (std::size_t j = 0; j < es.forms.size(); ++j)
      if (congruent_mod(f, es.forms[j], p)) block.push_back(j);
    if (block.size() != 2 || block[0] != i) continue;
    const auto& g = es.forms[block[1]];
    if (!g.newform()) continue;
    std::optional<HeckeLattice> l;
    try {
      l.emplace(localize_at_eigenform(es, f, p));
    } catch (const Error& e) {
      // Irrational eigensystems in the same residual block: not a clean pair.
      if (e.kind() == ErrorKind::Unsupported) continue;
      throw;
    }
    CongruentPair pair;
    pair.f = f.label;
    pair.g = g.label;
    pair.p = p;
    pair.eta = congruence_number(*l).valuation();
    pair.eta_coh = cohomological_congruence_number(*l).valuation();
    pair.oracle = sturm_congruence_exponent(f, g, p);
    pair.free = verify_freeness(*l);
    out.push_back(pair);
  }
  return out;
}

}  // namespace congrua
