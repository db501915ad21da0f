#include <algorithm>
#include <optional>

#include "congrua/modsym.hpp"

namespace congrua {

namespace {

Vector combine(const std::vector<Vector>& basis, const Vector& coords, std::size_t n) {
  Vector out(n);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (coords[i] != 0)
      for (std::size_t j = 0; j < n; ++j) out[j] += coords[i] * basis[i][j];
  return out;
}

// Integral, content 1, first nonzero entry positive.
Vector primitive(Vector v) {
  Integer den = 1, num = 0;
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  for (auto& x : v) {
    x *= den;
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), x.get_num_mpz_t());
  }
  if (num == 0) throw Error(ErrorKind::Degenerate, "zero vector has no primitive multiple");
  Integer sign = 1;
  for (const auto& x : v)
    if (x != 0) {
      sign = x > 0 ? 1 : -1;
      break;
    }
  for (auto& x : v) x /= Rational(num * sign);
  return v;
}

bool is_scalar(const Matrix& m, Rational& value) {
  value = m.rows() ? m(0, 0) : Rational(0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != (i == j ? value : Rational(0))) return false;
  return true;
}

Matrix minus_scalar(Matrix m, const Rational& a) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= a;
  return m;
}

// Largest integer a with a² ≤ 4ℓ^(k−1).
long ramanujan_bound(long ell, int k) {
  Integer bound;
  Integer four_power = 4;
  for (int i = 0; i < k - 1; ++i) four_power *= ell;
  mpz_sqrt(bound.get_mpz_t(), four_power.get_mpz_t());
  return bound.get_si();
}

// Basis of the common kernel of (m_i − a_i), refining `start` (columns are
// coordinates in the ambient basis of the matrices).
std::vector<Vector> refine(std::vector<Vector> current, const Matrix& m, const Rational& a) {
  if (current.empty()) return current;
  const std::size_t n = current[0].size();
  std::vector<Vector> images;
  for (const auto& v : current) images.push_back(sub(m * v, scale(v, a)));
  const auto ker = kernel(Matrix::from_columns(images, n));
  std::vector<Vector> out;
  for (const auto& k : ker) out.push_back(combine(current, k, n));
  return out;
}

std::vector<Vector> unit_vectors(std::size_t n) {
  std::vector<Vector> out(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

std::string letter_label(std::size_t i) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + i % 26));
    i /= 26;
  } while (i-- > 0);
  return s;
}

// Eigen-functional with φ ∘ T_ℓ = a_ℓ φ and φ ∘ ι = sign·φ, scaled so that
// its values on the lattice generate Z.
Vector eigen_functional(const ModularSymbolSpace& s, const EigenformData& f, int sign,
                        const std::vector<Vector>& lattice) {
  const std::size_t n = s.dimension();
  auto cur = refine(unit_vectors(n), s.star().transpose(), sign);
  for (const auto& [ell, a] : f.a) {
    if (cur.size() <= 1) break;
    cur = refine(cur, s.hecke(ell).transpose(), Rational(a));
  }
  if (cur.size() != 1)
    throw Error(ErrorKind::RankNotOne, "eigen-functional of " + f.label + " is not unique");
  Vector values;
  for (const auto& b : lattice) values.push_back(dot(cur[0], b));
  const Vector prim = primitive(values);
  std::size_t i = 0;
  while (values[i] == 0) ++i;
  return scale(cur[0], prim[i] / values[i]);
}

}  // namespace

CuspidalLattices cuspidal_lattices(const ModularSymbolSpace& s) {
  const std::size_t n = s.dimension();
  CuspidalLattices out;
  std::vector<Vector> symbols;
  for (std::size_t i = 0; i < s.num_symbols(); ++i) {
    Vector v(n);
    for (const auto& [j, x] : s.reduce(i)) v[j] = x;
    if (!is_zero(v)) symbols.push_back(std::move(v));
  }
  out.ambient = z_lattice_basis(symbols, n);
  auto lift = [&](const std::vector<Vector>& inner, const std::vector<Vector>& outer) {
    std::vector<Vector> r;
    for (const auto& c : inner) r.push_back(combine(outer, c, n));
    return r;
  };
  const Matrix basis = Matrix::from_columns(out.ambient, n);
  out.cuspidal = lift(z_kernel(s.boundary() * basis), out.ambient);
  const Matrix star = restrict_to(s.star(), out.cuspidal);
  const auto id = Matrix::identity(out.cuspidal.size());
  out.plus = lift(z_kernel(star - id), out.cuspidal);
  out.minus = lift(z_kernel(star + id), out.cuspidal);
  return out;
}

RationalEigensystems rational_eigensystems(std::shared_ptr<const ModularSymbolSpace> s, long bound) {
  RationalEigensystems out;
  out.space = s;
  out.lattices = cuspidal_lattices(*s);
  out.bound = std::max({bound, sturm_bound(s->level(), s->weight()), 20L});
  const long n = s->level();
  const int k = s->weight();
  const std::size_t dp = out.lattices.plus.size(), dm = out.lattices.minus.size();

  struct Piece {
    std::vector<Vector> basis;
    std::map<long, Integer> a;
  };
  std::vector<Piece> pieces;
  if (dp > 0) pieces.push_back({unit_vectors(dp), {}});
  for (long ell : primes_up_to(out.bound)) {
    if (n % ell == 0) continue;
    out.plus_hecke[ell] = restrict_to(s->hecke(ell), out.lattices.plus);
    out.minus_hecke[ell] = restrict_to(s->hecke(ell), out.lattices.minus);
    const Matrix& t = out.plus_hecke[ell];
    std::vector<Piece> next;
    for (auto& piece : pieces) {
      const Matrix r = restrict_to(t, piece.basis);
      Rational value;
      if (is_scalar(r, value)) {
        if (value.get_den() != 1)
          throw Error(ErrorKind::Degenerate, "non-integral Hecke eigenvalue");
        piece.a[ell] = value.get_num();
        next.push_back(std::move(piece));
        continue;
      }
      std::size_t found = 0;
      const long b = ramanujan_bound(ell, k);
      for (long a = -b; a <= b; ++a) {
        const auto ker = kernel(minus_scalar(r, a));
        if (ker.empty()) continue;
        Piece sub{{}, piece.a};
        for (const auto& c : ker) sub.basis.push_back(combine(piece.basis, c, dp));
        sub.a[ell] = a;
        found += ker.size();
        next.push_back(std::move(sub));
      }
      out.irrational_dimension += piece.basis.size() - found;
    }
    pieces = std::move(next);
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });

  for (std::size_t idx = 0; idx < pieces.size(); ++idx) {
    auto& piece = pieces[idx];
    EigenformData f;
    f.level = n;
    f.weight = k;
    f.label = std::to_string(n) + "." + std::to_string(k) + "." + letter_label(idx);
    f.multiplicity = piece.basis.size();
    f.a = piece.a;
    f.plus_space = piece.basis;
    f.minus_space = unit_vectors(dm);
    for (const auto& [ell, a] : f.a) f.minus_space = refine(f.minus_space, out.minus_hecke[ell], Rational(a));
    if (f.minus_space.size() != f.multiplicity)
      throw Error(ErrorKind::RankNotOne, "± eigenspaces of " + f.label + " differ in dimension");
    if (f.newform()) {
      f.delta_plus = combine(out.lattices.plus, primitive(f.plus_space[0]), s->dimension());
      f.delta_minus = combine(out.lattices.minus, primitive(f.minus_space[0]), s->dimension());
      f.phi_plus = eigen_functional(*s, f, 1, out.lattices.plus);
      f.phi_minus = eigen_functional(*s, f, -1, out.lattices.minus);
    }
    out.forms.push_back(std::move(f));
  }
  return out;
}

namespace {

// φ⁺ on every Manin symbol, cleared of denominators, and a generator where it
// does not vanish.
struct ScaledFunctional {
  std::vector<Integer> psi;
  Integer denominator = 1;
  std::size_t symbol = 0;
  Integer at_symbol;
};

ScaledFunctional scaled_functional(const ModularSymbolSpace& s, const EigenformData& f) {
  if (!f.newform()) throw Error(ErrorKind::InvalidArgument, "eigenvalues beyond the bound need a newform");
  const auto values = s.on_symbols(f.phi_plus);
  ScaledFunctional out;
  for (const auto& v : values) mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(), v.get_den_mpz_t());
  for (const auto& v : values) out.psi.push_back(Integer(v * out.denominator));
  std::size_t g = 0;
  while (f.phi_plus[g] == 0) ++g;
  out.symbol = s.generator_symbol(g);
  out.at_symbol = out.psi[out.symbol];
  return out;
}

Integer eigenvalue_with(const ModularSymbolSpace& s, const ScaledFunctional& sf, long ell) {
  const Integer v = s.hecke_functional(ell, sf.symbol, sf.psi);
  if (!mpz_divisible_p(v.get_mpz_t(), sf.at_symbol.get_mpz_t()))
    throw Error(ErrorKind::Degenerate, "non-integral Hecke eigenvalue");
  return Integer(v / sf.at_symbol);
}

}  // namespace

Integer eigenvalue(const ModularSymbolSpace& s, const EigenformData& f, long ell) {
  if (auto it = f.a.find(ell); it != f.a.end()) return it->second;
  return eigenvalue_with(s, scaled_functional(s, f), ell);
}

std::vector<Integer> q_expansion(const ModularSymbolSpace& s, const EigenformData& f, std::size_t n) {
  std::vector<Integer> a(n + 1, 0);
  if (n == 0) return a;
  a[1] = 1;
  std::vector<long> spf(n + 1, 0);
  for (std::size_t i = 2; i <= n; ++i)
    if (spf[i] == 0)
      for (std::size_t j = i; j <= n; j += i)
        if (spf[j] == 0) spf[j] = static_cast<long>(i);
  Integer power_k1;
  std::optional<ScaledFunctional> sf;
  for (std::size_t q = 2; q <= n; ++q) {
    if (spf[q] != static_cast<long>(q)) continue;
    const long ell = static_cast<long>(q);
    const auto known = f.a.find(ell);
    if (!sf && known == f.a.end()) sf = scaled_functional(s, f);
    const Integer al = known != f.a.end() ? known->second : eigenvalue_with(s, *sf, ell);
    mpz_ui_pow_ui(power_k1.get_mpz_t(), static_cast<unsigned long>(ell), static_cast<unsigned long>(f.weight - 1));
    const bool bad = s.level() % ell == 0;
    Integer prev = 1, cur = al;
    for (std::size_t pe = q; pe <= n; pe *= q) {
      a[pe] = cur;
      const Integer nxt = bad ? Integer(cur * al) : Integer(al * cur - power_k1 * prev);
      prev = cur;
      cur = nxt;
      if (pe > n / q) break;
    }
  }
  for (std::size_t m = 2; m <= n; ++m) {
    const auto q = static_cast<std::size_t>(spf[m]);
    std::size_t pe = q;
    while (m % (pe * q) == 0) pe *= q;
    if (pe != m) a[m] = a[pe] * a[m / pe];
  }
  return a;
}

}  // namespace congrua
