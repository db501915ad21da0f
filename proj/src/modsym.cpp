#include "congrua/modsym.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace congrua {

namespace {

long mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

// x·a + y·b = gcd(a, b) ≥ 0
long ext_gcd(long a, long b, long& x, long& y) {
  long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const long q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

void axpy(SparseVector& acc, const Rational& c, const SparseVector& v) {
  if (c == 0) return;
  for (const auto& [i, x] : v) {
    auto [it, fresh] = acc.emplace(i, c * x);
    if (!fresh) {
      it->second += c * x;
      if (it->second == 0) acc.erase(it);
    }
  }
}

Vector densify(const SparseVector& v, std::size_t n) {
  Vector out(n);
  for (const auto& [i, x] : v) out[i] = x;
  return out;
}

// Signed union-find for the two-term relations x_s = ±x_t.
struct SignedUnionFind {
  std::vector<std::size_t> parent;
  std::vector<int> sign;
  std::vector<bool> zero;

  explicit SignedUnionFind(std::size_t n) : parent(n), sign(n, 1), zero(n, false) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  std::pair<std::size_t, int> find(std::size_t s) {
    if (parent[s] == s) return {s, 1};
    auto [root, e] = find(parent[s]);
    parent[s] = root;
    sign[s] *= e;
    return {root, sign[s]};
  }

  // x_s = rel·x_t
  void join(std::size_t s, std::size_t t, int rel) {
    auto [rs, es] = find(s);
    auto [rt, et] = find(t);
    const int e = es * rel * et;
    if (rs == rt) {
      if (e == -1) zero[rs] = true;
      return;
    }
    parent[rs] = rt;
    sign[rs] = e;
    if (zero[rs]) zero[rt] = true;
  }
};

}  // namespace

// ---------------------------------------------------------------- P¹(Z/N)

P1List::P1List(long n) : n_(n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
  std::vector<long> units;
  for (long u = 0; u < n; ++u)
    if (std::gcd(u, n) == 1) units.push_back(u);
  table_.assign(static_cast<std::size_t>(n * n), -1);
  for (long c = 0; c < n; ++c)
    for (long d = 0; d < n; ++d) {
      if (std::gcd(std::gcd(c, d), n) != 1 || table_[c * n + d] >= 0) continue;
      const long idx = static_cast<long>(reps_.size());
      reps_.emplace_back(c, d);
      for (long u : units) table_[mod(u * c, n) * n + mod(u * d, n)] = idx;
    }
}

long P1List::index(long c, long d) const { return table_[mod(c, n_) * n_ + mod(d, n_)]; }

// ---------------------------------------------------------------- Heilbronn

namespace {

// a/b rounded to nearest, halves away from zero (as lround would).
long round_div(long a, long b) {
  long q = a / b;
  const long r = a - q * b;
  if (2 * std::abs(r) >= std::abs(b)) q += ((a < 0) != (b < 0)) ? -1 : 1;
  return q;
}

template <typename F>
void visit_cremona(long ell, F&& f) {
  f(Mat2{1, 0, 0, ell});
  if (ell == 2) {
    f(Mat2{2, 0, 0, 1});
    f(Mat2{2, 1, 0, 1});
    f(Mat2{1, 0, 1, 2});
    return;
  }
  for (long r = -(ell / 2); r <= ell / 2; ++r) {
    long x1 = ell, x2 = -r, y1 = 0, y2 = 1, a = -ell, b = r;
    f(Mat2{x1, x2, y1, y2});
    while (b != 0) {
      const long q = round_div(a, b);
      const long c = a - b * q;
      a = -b;
      b = c;
      const long x3 = q * x2 - x1;
      x1 = x2;
      x2 = x3;
      const long y3 = q * y2 - y1;
      y1 = y2;
      y2 = y3;
      f(Mat2{x1, x2, y1, y2});
    }
  }
}

}  // namespace

std::vector<Mat2> heilbronn_cremona(long ell) {
  if (!is_prime(ell)) throw Error(ErrorKind::InvalidArgument, "Cremona's set needs a prime");
  std::vector<Mat2> out;
  visit_cremona(ell, [&](const Mat2& m) { out.push_back(m); });
  return out;
}

std::vector<Mat2> heilbronn_merel(long n) {
  std::vector<Mat2> out;
  for (long a = 1; a <= n; ++a)
    for (long b = 0; b < a; ++b)
      for (long c = 0; c * (a - b) < n; ++c) {
        const long num = n + b * c;
        if (num % a == 0) out.push_back({a, b, c, num / a});
      }
  return out;
}

std::vector<Integer> transform_monomial(int i, int degree, const Mat2& m) {
  std::vector<Integer> poly{1};  // indexed by the exponent of X
  auto times = [&poly](long x, long y) {
    std::vector<Integer> next(poly.size() + 1);
    for (std::size_t e = 0; e < poly.size(); ++e) {
      next[e + 1] += poly[e] * x;
      next[e] += poly[e] * y;
    }
    poly = std::move(next);
  };
  for (int t = 0; t < i; ++t) times(m.a, m.b);
  for (int t = i; t < degree; ++t) times(m.c, m.d);
  return poly;
}

// ---------------------------------------------------------------- cusps

CuspClasses::CuspClasses(long n) : n_(n) {
  for (long s = 0; s < n; ++s)
    if (std::gcd(s, n) == 1) units_.push_back(s);
}

std::size_t CuspClasses::index(long u, long v) {
  const long vv = mod(v, n_);
  const long g = std::gcd(vv, n_);
  const long uu = mod(u, g);
  if (auto it = cache_.find({vv, uu}); it != cache_.end()) return it->second;
  std::pair<long, long> key{n_, n_};
  for (long s : units_) {
    long inv = 0, unused = 0;
    ext_gcd(s, n_, inv, unused);
    key = std::min(key, std::make_pair(mod(s * vv, n_), mod(inv * uu, g)));
  }
  auto [it, fresh] = keys_.emplace(key, count_);
  if (fresh) ++count_;
  cache_.emplace(std::make_pair(vv, uu), it->second);
  return it->second;
}

std::size_t cusp_count(long n) {
  std::size_t total = 0;
  for (long d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const long g = std::gcd(d, n / d);
    for (long u = 1; u <= g; ++u)
      if (std::gcd(u, g) == 1) ++total;
  }
  return total;
}

Mat2 lift_to_sl2(long c, long d, long n) {
  if (n == 1) return {1, 0, 0, 1};
  c = mod(c, n);
  d = mod(d, n);
  if (c == 0) c = n;
  long dd = d;
  while (std::gcd(c, dd) != 1) dd += n;
  long x = 0, y = 0;
  ext_gcd(dd, c, x, y);  // x·dd + y·c = 1
  return {x, -y, c, dd};
}

// ---------------------------------------------------------------- the space

ModularSymbolSpace::ModularSymbolSpace(long level, int weight) : n_(level), k_(weight), p1_(level) {
  if (weight < 2 || weight % 2 != 0)
    throw Error(ErrorKind::InvalidArgument, "weight must be even and at least 2");
  const int deg = k_ - 2;
  const std::size_t np1 = p1_.size();
  const std::size_t ns = static_cast<std::size_t>(k_ - 1) * np1;

  // x + xσ = 0, σ = (0 −1; 1 0)
  SignedUnionFind uf(ns);
  for (std::size_t idx = 0; idx < np1; ++idx) {
    const auto [c, d] = p1_.element(idx);
    const auto target = static_cast<std::size_t>(p1_.index(d, -c));
    for (int i = 0; i <= deg; ++i) {
      const int rel = (i % 2 == 0) ? -1 : 1;
      uf.join(symbol_index(i, idx), symbol_index(deg - i, target), rel);
    }
  }
  std::vector<long> rep_col(ns, -1);
  std::size_t nreps = 0;
  std::vector<std::size_t> rep_symbol;
  for (std::size_t s = 0; s < ns; ++s) {
    auto [root, e] = uf.find(s);
    if (root == s && !uf.zero[s]) {
      rep_col[s] = static_cast<long>(nreps++);
      rep_symbol.push_back(s);
    }
  }
  auto rep_of = [&](std::size_t s) -> std::pair<long, int> {
    auto [root, e] = uf.find(s);
    if (uf.zero[root]) return {-1, 0};
    return {rep_col[root], e};
  };

  // x + xτ + xτ² = 0, τ = (0 −1; 1 −1), as sparse rows in representative
  // columns, kept in reduced echelon form.
  std::vector<SparseVector> rows;
  std::vector<long> pivot_row(nreps, -1);
  const Mat2 t1{0, -1, 1, -1}, t2{-1, 1, -1, 0};
  for (std::size_t idx = 0; idx < np1; ++idx) {
    const auto [c, d] = p1_.element(idx);
    const auto i1 = static_cast<std::size_t>(p1_.index(d, -c - d));
    const auto i2 = static_cast<std::size_t>(p1_.index(-c - d, c));
    for (int i = 0; i <= deg; ++i) {
      SparseVector row;
      auto add = [&](std::size_t s, const Integer& coef) {
        auto [col, e] = rep_of(s);
        if (col < 0 || coef == 0) return;
        axpy(row, Rational(coef * e), SparseVector{{static_cast<std::size_t>(col), 1}});
      };
      add(symbol_index(i, idx), 1);
      const auto p1 = transform_monomial(i, deg, t1);
      const auto p2 = transform_monomial(i, deg, t2);
      for (int j = 0; j <= deg; ++j) {
        add(symbol_index(j, i1), p1[j]);
        add(symbol_index(j, i2), p2[j]);
      }
      std::vector<std::pair<std::size_t, Rational>> hits;
      for (const auto& [col, x] : row)
        if (pivot_row[col] >= 0) hits.emplace_back(col, x);
      for (const auto& [col, x] : hits) axpy(row, -x, rows[pivot_row[col]]);
      if (row.empty()) continue;
      const std::size_t piv = row.rbegin()->first;
      const Rational inv = 1 / row.rbegin()->second;
      for (auto& [col, x] : row) x *= inv;
      for (auto& other : rows) {
        auto it = other.find(piv);
        if (it != other.end()) {
          const Rational f = it->second;
          axpy(other, -f, row);
        }
      }
      pivot_row[piv] = static_cast<long>(rows.size());
      rows.push_back(std::move(row));
    }
  }

  std::vector<long> free_col(nreps, -1);
  for (std::size_t col = 0; col < nreps; ++col)
    if (pivot_row[col] < 0) {
      free_col[col] = static_cast<long>(gens_.size());
      gens_.push_back(rep_symbol[col]);
    }
  std::vector<SparseVector> rep_expr(nreps);
  for (std::size_t col = 0; col < nreps; ++col) {
    if (free_col[col] >= 0) {
      rep_expr[col][static_cast<std::size_t>(free_col[col])] = 1;
      continue;
    }
    for (const auto& [c2, x] : rows[pivot_row[col]])
      if (c2 != col) rep_expr[col][static_cast<std::size_t>(free_col[c2])] = -x;
  }
  exprs_.resize(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    auto [col, e] = rep_of(s);
    if (col < 0) continue;
    axpy(exprs_[s], e, rep_expr[col]);
  }

  // Boundary and star on the generators.
  const std::size_t dim = gens_.size();
  CuspClasses cc(n_);
  std::vector<SparseVector> bcols;
  for (std::size_t g = 0; g < dim; ++g) bcols.push_back(boundary_of(gens_[g], cc));
  cusps_ = cusp_count(n_);
  boundary_ = Matrix(cusps_, dim);
  for (std::size_t g = 0; g < dim; ++g)
    for (const auto& [i, x] : bcols[g]) boundary_(i, g) = x;

  star_ = Matrix(dim, dim);
  for (std::size_t g = 0; g < dim; ++g) {
    const std::size_t s = gens_[g];
    const int i = static_cast<int>(s % static_cast<std::size_t>(k_ - 1));
    const auto [c, d] = p1_.element(s / static_cast<std::size_t>(k_ - 1));
    const auto target = static_cast<std::size_t>(p1_.index(-c, d));
    const int e = (i % 2 == 0) ? -1 : 1;
    for (const auto& [j, x] : exprs_[symbol_index(i, target)]) star_(j, g) = e * x;
  }
}

std::size_t ModularSymbolSpace::symbol_index(int i, std::size_t p1index) const {
  return static_cast<std::size_t>(i) + static_cast<std::size_t>(k_ - 1) * p1index;
}

Vector ModularSymbolSpace::manin_symbol(const std::vector<Integer>& poly, long c, long d) const {
  Vector out(dimension());
  const long idx = p1_.index(c, d);
  if (idx < 0) return out;
  SparseVector acc;
  for (int i = 0; i <= k_ - 2; ++i)
    axpy(acc, Rational(poly[i]), exprs_[symbol_index(i, static_cast<std::size_t>(idx))]);
  return densify(acc, dimension());
}

SparseVector ModularSymbolSpace::boundary_of(std::size_t symbol, CuspClasses& cc) const {
  const int i = static_cast<int>(symbol % static_cast<std::size_t>(k_ - 1));
  const auto [c, d] = p1_.element(symbol / static_cast<std::size_t>(k_ - 1));
  const Mat2 g = lift_to_sl2(c, d, n_);
  SparseVector out;
  // P(1,0)·{g∞} − P(0,1)·{g0}
  if (i == k_ - 2) axpy(out, 1, SparseVector{{cc.index(g.a, g.c), 1}});
  if (i == 0) axpy(out, -1, SparseVector{{cc.index(g.b, g.d), 1}});
  return out;
}

std::size_t ModularSymbolSpace::cuspidal_dimension() const { return dimension() - rank(boundary_); }

SparseVector ModularSymbolSpace::apply_heilbronn(const std::vector<Mat2>& hs, std::size_t symbol) const {
  const int deg = k_ - 2;
  const int i = static_cast<int>(symbol % static_cast<std::size_t>(k_ - 1));
  const auto [c, d] = p1_.element(symbol / static_cast<std::size_t>(k_ - 1));
  SparseVector acc;
  for (const auto& h : hs) {
    const long idx = p1_.index(c * h.a + d * h.c, c * h.b + d * h.d);
    if (idx < 0) continue;
    if (deg == 0) {
      axpy(acc, 1, exprs_[static_cast<std::size_t>(idx)]);
      continue;
    }
    const auto poly = transform_monomial(i, deg, h);
    for (int j = 0; j <= deg; ++j)
      if (poly[j] != 0) axpy(acc, Rational(poly[j]), exprs_[symbol_index(j, static_cast<std::size_t>(idx))]);
  }
  return acc;
}

SparseVector ModularSymbolSpace::hecke_on_symbol(long n, std::size_t symbol) const {
  if (is_prime(n) && n_ % n != 0) return apply_heilbronn(heilbronn_cremona(n), symbol);
  return apply_heilbronn(heilbronn_merel(n), symbol);
}

Integer ModularSymbolSpace::hecke_functional(long n, std::size_t symbol, const std::vector<Integer>& psi) const {
  const int deg = k_ - 2;
  const int i = static_cast<int>(symbol % static_cast<std::size_t>(k_ - 1));
  const auto [c, d] = p1_.element(symbol / static_cast<std::size_t>(k_ - 1));
  if (deg == 0 && is_prime(n) && n_ % n != 0) {
    // Weight 2: the sum has O(ℓ log ℓ) terms, so 64 bits suffice when every
    // |ψ| < 2^32. The Heilbronn set is not materialized.
    std::vector<long> small;
    for (const auto& v : psi) {
      if (!v.fits_slong_p() || abs(v) >= (Integer(1) << 32)) break;
      small.push_back(v.get_si());
    }
    if (small.size() == psi.size()) {
      long acc = 0;
      visit_cremona(n, [&](const Mat2& h) {
        const long idx = p1_.index(c * h.a + d * h.c, c * h.b + d * h.d);
        if (idx >= 0) acc += small[static_cast<std::size_t>(idx)];
      });
      return acc;
    }
  }
  const auto hs = (is_prime(n) && n_ % n != 0) ? heilbronn_cremona(n) : heilbronn_merel(n);
  Integer acc = 0;
  for (const auto& h : hs) {
    const long idx = p1_.index(c * h.a + d * h.c, c * h.b + d * h.d);
    if (idx < 0) continue;
    if (deg == 0) {
      acc += psi[static_cast<std::size_t>(idx)];
      continue;
    }
    const auto poly = transform_monomial(i, deg, h);
    for (int j = 0; j <= deg; ++j)
      if (poly[j] != 0) acc += poly[j] * psi[symbol_index(j, static_cast<std::size_t>(idx))];
  }
  return acc;
}

std::vector<Rational> ModularSymbolSpace::on_symbols(const Vector& phi) const {
  std::vector<Rational> out(exprs_.size());
  for (std::size_t s = 0; s < exprs_.size(); ++s)
    for (const auto& [j, x] : exprs_[s]) out[s] += phi[j] * x;
  return out;
}

const Matrix& ModularSymbolSpace::hecke(long n) const {
  if (auto it = hecke_cache_.find(n); it != hecke_cache_.end()) return it->second;
  const auto hs = (is_prime(n) && n_ % n != 0) ? heilbronn_cremona(n) : heilbronn_merel(n);
  Matrix m(dimension(), dimension());
  for (std::size_t g = 0; g < dimension(); ++g)
    for (const auto& [i, x] : apply_heilbronn(hs, gens_[g])) m(i, g) = x;
  return hecke_cache_.emplace(n, std::move(m)).first->second;
}

Matrix ModularSymbolSpace::hecke_merel(long n) const {
  const auto hs = heilbronn_merel(n);
  Matrix m(dimension(), dimension());
  for (std::size_t g = 0; g < dimension(); ++g)
    for (const auto& [i, x] : apply_heilbronn(hs, gens_[g])) m(i, g) = x;
  return m;
}

std::shared_ptr<const ModularSymbolSpace> build_space(long level, int weight) {
  return std::make_shared<const ModularSymbolSpace>(level, weight);
}

// ---------------------------------------------------------------- Z-lattices

namespace {

using IntRow = std::vector<Integer>;

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Row Hermite normal form, pivoting only on the first `pivot_cols` columns.
// Returns the number of pivot rows; rows after them are zero on those columns.
std::size_t hnf(std::vector<IntRow>& rows, std::size_t pivot_cols) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < pivot_cols && r < rows.size(); ++col) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])))
          best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        const Integer q = floor_div(rows[i][col], rows[r][col]);
        for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (r >= rows.size() || rows[r][col] == 0) continue;
    if (rows[r][col] < 0)
      for (auto& x : rows[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      const Integer q = floor_div(rows[i][col], rows[r][col]);
      if (q != 0)
        for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= q * rows[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

std::vector<Vector> z_lattice_basis(const std::vector<Vector>& generators, std::size_t n) {
  Integer den = 1;
  for (const auto& v : generators)
    for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<IntRow> rows;
  for (const auto& v : generators) {
    IntRow row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = Integer(v[j] * den);
    rows.push_back(std::move(row));
  }
  const std::size_t r = hnf(rows, n);
  std::vector<Vector> out;
  for (std::size_t i = 0; i < r; ++i) {
    Vector v(n);
    for (std::size_t j = 0; j < n; ++j) {
      v[j] = Rational(rows[i][j], den);
      v[j].canonicalize();
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vector> z_kernel(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<IntRow> rows(n, IntRow(m + n));
  for (std::size_t i = 0; i < m; ++i) {
    Integer den = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < n; ++j) rows[j][i] = Integer(a(i, j) * den);
  }
  for (std::size_t j = 0; j < n; ++j) rows[j][m + j] = 1;
  const std::size_t r = hnf(rows, m);
  std::vector<Vector> kern;
  for (std::size_t i = r; i < n; ++i) {
    Vector v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = rows[i][m + j];
    kern.push_back(std::move(v));
  }
  return z_lattice_basis(kern, n);
}

Matrix restrict_to(const Matrix& op, const std::vector<Vector>& basis) {
  Matrix r(basis.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const Vector c = coordinates(basis, op * basis[j]);
    for (std::size_t i = 0; i < basis.size(); ++i) r(i, j) = c[i];
  }
  return r;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<long> primes_up_to(long n) {
  std::vector<long> out;
  for (long q = 2; q <= n; ++q)
    if (is_prime(q)) out.push_back(q);
  return out;
}

long sturm_bound(long level, int weight) {
  long index = level;
  for (long q = 2, m = level; m > 1; ++q)
    if (m % q == 0) {
      index = index / q * (q + 1);
      while (m % q == 0) m /= q;
    }
  return (weight * index + 11) / 12;
}

}  // namespace congrua
