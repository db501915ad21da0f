#include "congrua/finalg.hpp"

#include <random>

namespace congrua {

namespace {

bool all_units(const Matrix& g, unsigned long p) {
  if (g.rows() != g.cols()) return false;
  const SmithForm s = snf(g, p);
  if (s.rank != g.rows()) return false;
  for (int v : s.diagonal_valuations)
    if (v != 0) return false;
  return true;
}

std::vector<Vector> images(const Matrix& a, const std::vector<Vector>& vs) {
  std::vector<Vector> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(a * v);
  return out;
}

Matrix stack(const std::vector<Matrix>& blocks, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix out(rows, cols);
  std::size_t r = 0;
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.rows(); ++i, ++r)
      for (std::size_t j = 0; j < cols; ++j) out(r, j) = b(i, j);
  return out;
}

std::string fraction(const Rational& x) { return x.get_str(); }

Rational parse_fraction(const std::string& s) {
  Rational x(s);
  x.canonicalize();
  return x;
}

}  // namespace

// ---------------------------------------------------------------- algebra

FiniteFlatAlgebra::FiniteFlatAlgebra(std::size_t rank, std::vector<Rational> constants, Vector unit,
                                     unsigned long p)
    : n_(rank), c_(std::move(constants)), unit_(std::move(unit)), p_(p) {
  if (n_ == 0) throw Error(ErrorKind::InvalidArgument, "algebra of rank zero");
  if (c_.size() != n_ * n_ * n_ || unit_.size() != n_)
    throw Error(ErrorKind::InvalidArgument, "structure constant shape");
  for (const auto& x : c_)
    if (!is_p_integral(x, p_))
      throw Error(ErrorKind::InvalidArgument, "structure constants must be p-integral");
  for (const auto& x : unit_)
    if (!is_p_integral(x, p_)) throw Error(ErrorKind::InvalidArgument, "unit must be p-integral");
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        if (constant(i, j, k) != constant(j, i, k))
          throw Error(ErrorKind::InvalidArgument, "multiplication is not commutative");
  std::vector<Matrix> left;
  for (std::size_t i = 0; i < n_; ++i) left.push_back(multiplication_matrix(basis_vector(i)));
  if (multiplication_matrix(unit_) != Matrix::identity(n_))
    throw Error(ErrorKind::InvalidArgument, "unit does not act as the identity");
  // L_{e_i}·L_{e_j} = L_{e_i e_j} is associativity on all basis triples.
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) {
      Matrix prod(n_, n_);
      for (std::size_t k = 0; k < n_; ++k)
        if (constant(i, j, k) != 0) prod = prod + left[k].scaled(constant(i, j, k));
      if (left[i] * left[j] != prod)
        throw Error(ErrorKind::InvalidArgument, "multiplication is not associative");
    }
}

FiniteFlatAlgebra FiniteFlatAlgebra::split(std::size_t n, unsigned long p) {
  std::vector<Vector> basis;
  for (std::size_t i = 0; i < n; ++i) {
    Vector v(n);
    v[i] = 1;
    basis.push_back(v);
  }
  return suborder(basis, p);
}

FiniteFlatAlgebra FiniteFlatAlgebra::suborder(const std::vector<Vector>& basis, unsigned long p) {
  if (basis.empty()) throw Error(ErrorKind::InvalidArgument, "empty basis");
  const std::size_t n = basis.size(), r = basis[0].size();
  const Matrix b = Matrix::from_columns(basis, r);
  if (congrua::rank(b) != n) throw Error(ErrorKind::InvalidArgument, "order basis is dependent");
  // Left inverse through n independent ambient rows.
  std::vector<std::size_t> chosen;
  std::vector<Vector> picked;
  for (std::size_t i = 0; i < r && chosen.size() < n; ++i) {
    picked.push_back(b.row(i));
    if (congrua::rank(Matrix::from_rows(picked, n)) == picked.size()) chosen.push_back(i);
    else picked.pop_back();
  }
  Matrix square(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) square(i, j) = b(chosen[i], j);
  auto coords = [&](const Vector& v) {
    Vector rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = v[chosen[i]];
    auto x = solve_linear(square, rhs);
    if (!x || b * *x != v) throw Error(ErrorKind::InvalidArgument, "basis not closed under products");
    return *x;
  };
  std::vector<Rational> c(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Vector prod(r);
      for (std::size_t a = 0; a < r; ++a) prod[a] = basis[i][a] * basis[j][a];
      const Vector x = coords(prod);
      for (std::size_t k = 0; k < n; ++k) c[(i * n + j) * n + k] = c[(j * n + i) * n + k] = x[k];
    }
  return FiniteFlatAlgebra(n, std::move(c), coords(Vector(r, Rational(1))), p);
}

Vector FiniteFlatAlgebra::basis_vector(std::size_t i) const {
  Vector v(n_);
  v[i] = 1;
  return v;
}

Vector FiniteFlatAlgebra::multiply(const Vector& x, const Vector& y) const {
  Vector out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < n_; ++j) {
      if (y[j] == 0) continue;
      const Rational xy = x[i] * y[j];
      for (std::size_t k = 0; k < n_; ++k)
        if (constant(i, j, k) != 0) out[k] += xy * constant(i, j, k);
    }
  }
  return out;
}

Matrix FiniteFlatAlgebra::multiplication_matrix(const Vector& x) const {
  Matrix l(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        if (constant(i, j, k) != 0) l(k, j) += x[i] * constant(i, j, k);
  }
  return l;
}

void validate_character(const FiniteFlatAlgebra& t, const Character& lambda) {
  const std::size_t n = t.rank();
  if (lambda.values.size() != n) throw Error(ErrorKind::InvalidArgument, "character shape");
  for (const auto& x : lambda.values)
    if (!is_p_integral(x, t.prime()))
      throw Error(ErrorKind::InvalidArgument, "character values must lie in O");
  if (lambda(t.unit()) != 1) throw Error(ErrorKind::InvalidArgument, "character does not send 1 to 1");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (lambda(t.multiply(t.basis_vector(i), t.basis_vector(j))) !=
          lambda.values[i] * lambda.values[j])
        throw Error(ErrorKind::InvalidArgument, "character is not multiplicative");
}

// ---------------------------------------------------------------- modules

Matrix AlgebraModule::action_of(const Vector& t) const {
  Matrix out(rank, rank);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] != 0) out = out + action[i].scaled(t[i]);
  return out;
}

AlgebraModule regular_module(const FiniteFlatAlgebra& t) {
  AlgebraModule m;
  m.rank = t.rank();
  for (std::size_t i = 0; i < t.rank(); ++i)
    m.action.push_back(t.multiplication_matrix(t.basis_vector(i)));
  return m;
}

AlgebraModule dual_module(const AlgebraModule& m) {
  AlgebraModule d;
  d.rank = m.rank;
  for (const auto& a : m.action) d.action.push_back(a.transpose());
  return d;
}

AlgebraModule direct_sum(const AlgebraModule& a, const AlgebraModule& b) {
  if (a.action.size() != b.action.size())
    throw Error(ErrorKind::InvalidArgument, "modules over different algebras");
  AlgebraModule s;
  s.rank = a.rank + b.rank;
  for (std::size_t t = 0; t < a.action.size(); ++t) {
    Matrix m(s.rank, s.rank);
    for (std::size_t i = 0; i < a.rank; ++i)
      for (std::size_t j = 0; j < a.rank; ++j) m(i, j) = a.action[t](i, j);
    for (std::size_t i = 0; i < b.rank; ++i)
      for (std::size_t j = 0; j < b.rank; ++j) m(a.rank + i, a.rank + j) = b.action[t](i, j);
    s.action.push_back(std::move(m));
  }
  return s;
}

void validate_module(const FiniteFlatAlgebra& t, const AlgebraModule& m) {
  const std::size_t n = t.rank();
  if (m.action.size() != n) throw Error(ErrorKind::InvalidArgument, "one action matrix per basis element");
  for (const auto& a : m.action)
    if (a.rows() != m.rank || a.cols() != m.rank || !a.is_p_integral(t.prime()))
      throw Error(ErrorKind::InvalidArgument, "action matrices must be integral and square");
  if (m.action_of(t.unit()) != Matrix::identity(m.rank))
    throw Error(ErrorKind::InvalidArgument, "unit does not act as the identity");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (m.action[i] * m.action[j] != m.action_of(t.multiply(t.basis_vector(i), t.basis_vector(j))))
        throw Error(ErrorKind::InvalidArgument, "action does not respect multiplication");
}

void validate_pairing(const FiniteFlatAlgebra& t, const PerfectPairing& pr) {
  validate_module(t, pr.left);
  validate_module(t, pr.right);
  if (pr.gram.rows() != pr.left.rank || pr.gram.cols() != pr.right.rank)
    throw Error(ErrorKind::InvalidArgument, "gram shape");
  if (!all_units(pr.gram, t.prime())) throw Error(ErrorKind::InvalidArgument, "pairing is not perfect");
  for (std::size_t i = 0; i < t.rank(); ++i)
    if (pr.left.action[i].transpose() * pr.gram != pr.gram * pr.right.action[i])
      throw Error(ErrorKind::InvalidArgument, "pairing is not T-bilinear");
}

// ---------------------------------------------------------------- base change

Character BaseChangeDatum::lambda_prime() const {
  return Character{theta.transpose() * lambda.values};
}

void validate_datum(const BaseChangeDatum& d) {
  const auto& s = d.source;
  const auto& t = d.target;
  if (d.theta.rows() != t.rank() || d.theta.cols() != s.rank())
    throw Error(ErrorKind::InvalidArgument, "theta shape");
  if (s.prime() != t.prime()) throw Error(ErrorKind::InvalidArgument, "algebras over different primes");
  if (!d.theta.is_p_integral(s.prime())) throw Error(ErrorKind::InvalidArgument, "theta not integral");
  if (d.theta * s.unit() != t.unit()) throw Error(ErrorKind::InvalidArgument, "theta is not unital");
  for (std::size_t i = 0; i < s.rank(); ++i)
    for (std::size_t j = i; j < s.rank(); ++j) {
      const Vector lhs = d.theta * s.multiply(s.basis_vector(i), s.basis_vector(j));
      const Vector rhs = t.multiply(d.theta.column(i), d.theta.column(j));
      if (lhs != rhs) throw Error(ErrorKind::InvalidArgument, "theta is not multiplicative");
    }
  if (rank(d.theta) != t.rank())
    throw Error(ErrorKind::InvalidArgument, "theta is not surjective after tensoring with K");
  validate_character(t, d.lambda);
}

bool theta_surjective_over_o(const BaseChangeDatum& d) {
  const SmithForm s = snf(d.theta, d.source.prime());
  if (s.rank != d.target.rank()) return false;
  for (int v : s.diagonal_valuations)
    if (v != 0) return false;
  return true;
}

// ---------------------------------------------------------------- ideals

Vector idempotent_for_character(const FiniteFlatAlgebra& t, const Character& lambda) {
  const std::size_t n = t.rank();
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < n; ++i)
    blocks.push_back(t.multiplication_matrix(t.basis_vector(i)) -
                     Matrix::identity(n).scaled(lambda.values[i]));
  const Matrix eigen = stack(blocks, n);
  if (rank(eigen) != n - 1)
    throw Error(ErrorKind::NoIdempotent, "the eigenspace of the character is not a line");
  Matrix full = stack({eigen, Matrix::from_rows({lambda.values}, n)}, n);
  Vector rhs(full.rows());
  rhs.back() = 1;
  auto e = solve_linear(full, rhs);
  if (!e) throw Error(ErrorKind::NoIdempotent, "the character vanishes on its eigenline");
  return *e;
}

PIdeal ideal_of_values(const Vector& functional, const std::vector<Vector>& lattice,
                       unsigned long p) {
  int best = kInfiniteValuation;
  for (const auto& b : lattice) {
    const Rational x = dot(functional, b);
    if (x != 0) best = std::min(best, valuation(x, p));
  }
  if (best == kInfiniteValuation) return PIdeal::zero();
  if (best < 0) throw Error(ErrorKind::InvalidArgument, "functional is not integral on the lattice");
  return PIdeal::power(best);
}

std::vector<Vector> kernel_lattice(const Matrix& map, unsigned long p) {
  return saturate(kernel(map), map.cols(), p);
}

std::vector<Vector> annihilator(const FiniteFlatAlgebra& t, const std::vector<Vector>& s) {
  const std::size_t n = t.rank();
  if (s.empty()) {
    std::vector<Vector> all;
    for (std::size_t i = 0; i < n; ++i) all.push_back(t.basis_vector(i));
    return all;
  }
  std::vector<Matrix> blocks;
  for (const auto& x : s) blocks.push_back(t.multiplication_matrix(x));
  return kernel_lattice(stack(blocks, n), t.prime());
}

PIdeal eta(const FiniteFlatAlgebra& t, const Character& lambda) {
  const unsigned long p = t.prime();
  const Vector e = idempotent_for_character(t, lambda);
  const auto ker = kernel_lattice(Matrix::from_rows({lambda.values}, t.rank()), p);
  const auto ann = annihilator(t, ker);
  const PIdeal result = ideal_of_values(lambda.values, ann, p);
  // η is also the exact denominator of e_λ.
  const int denominator = -min_valuation(e, p);
  if (ann.size() != 1 || result.is_zero() || result.valuation() != denominator)
    throw Error(ErrorKind::NoIdempotent, "annihilator disagrees with the idempotent denominator");
  return result;
}

std::vector<Vector> lambda_part(const FiniteFlatAlgebra& t, const AlgebraModule& m,
                                const Character& lambda) {
  const Matrix e = m.action_of(idempotent_for_character(t, lambda));
  return saturate(e.columns(), m.rank, t.prime());
}

FiniteModulePresentation c0_module(const FiniteFlatAlgebra& t, const AlgebraModule& m,
                                   const Character& lambda) {
  const Matrix e = m.action_of(idempotent_for_character(t, lambda));
  const auto cols = e.columns();
  return quotient_presentation(cols, saturate(cols, m.rank, t.prime()), m.rank, t.prime());
}

PIdeal eta_of_module(const FiniteFlatAlgebra& t, const AlgebraModule& m, const Character& lambda) {
  return fitting_ideal(c0_module(t, m, lambda));
}

DualityReport duality_transfer(const FiniteFlatAlgebra& t, const PerfectPairing& pr,
                               const Character& lambda) {
  DualityReport r;
  r.left = eta_of_module(t, pr.left, lambda);
  r.right = eta_of_module(t, pr.right, lambda);
  const auto d1 = lambda_part(t, pr.left, lambda);
  const auto d2 = lambda_part(t, pr.right, lambda);
  if (d1.size() != 1 || d2.size() != 1)
    throw Error(ErrorKind::RankNotOne, "lambda-parts must have rank one");
  r.pairing = PIdeal::generated_by(dot(d1[0], pr.gram * d2[0]), t.prime());
  return r;
}

PIdeal eta_sharp(const BaseChangeDatum& d) {
  const auto ker = kernel_lattice(d.theta, d.source.prime());
  return ideal_of_values(d.lambda_prime().values, annihilator(d.source, ker), d.source.prime());
}

Vector theta_idempotent(const BaseChangeDatum& d) {
  const auto& s = d.source;
  const std::size_t n = s.rank();
  std::vector<Matrix> blocks{d.theta};
  for (const auto& k : kernel(d.theta)) blocks.push_back(s.multiplication_matrix(k));
  const Matrix a = stack(blocks, n);
  if (rank(a) != n) throw Error(ErrorKind::NoIdempotent, "theta does not split off a factor of T'_K");
  Vector rhs(a.rows());
  for (std::size_t i = 0; i < d.target.rank(); ++i) rhs[i] = d.target.unit()[i];
  auto e = solve_linear(a, rhs);
  if (!e) throw Error(ErrorKind::NoIdempotent, "theta does not split off a factor of T'_K");
  return *e;
}

PIdeal eta_sharp_of_module(const BaseChangeDatum& d, const AlgebraModule& m) {
  const unsigned long p = d.source.prime();
  const Matrix e_prime = m.action_of(idempotent_for_character(d.source, d.lambda_prime()));
  const Matrix e_theta = m.action_of(theta_idempotent(d));
  const auto m_t = saturate(e_theta.columns(), m.rank, p);
  return fitting_ideal(quotient_presentation(e_prime.columns(), images(e_prime, m_t), m.rank, p));
}

BCFactorization check_bc_factorization(const BaseChangeDatum& d, const AlgebraModule& m) {
  const unsigned long p = d.source.prime();
  BCFactorization r;
  r.eta_lambda_prime = eta_of_module(d.source, m, d.lambda_prime());
  const Matrix e_prime = m.action_of(idempotent_for_character(d.source, d.lambda_prime()));
  const Matrix e_theta = m.action_of(theta_idempotent(d));
  const auto m_t = saturate(e_theta.columns(), m.rank, p);
  const auto upper = images(e_prime, m_t);
  r.eta_lambda_mt = fitting_ideal(quotient_presentation(upper, saturate(upper, m.rank, p), m.rank, p));
  r.eta_sharp = fitting_ideal(quotient_presentation(e_prime.columns(), upper, m.rank, p));
  return r;
}

// ---------------------------------------------------------------- Gorenstein

Matrix gorenstein_gram(const FiniteFlatAlgebra& t, const Vector& phi) {
  const std::size_t n = t.rank();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (t.constant(i, j, k) != 0) g(i, j) += t.constant(i, j, k) * phi[k];
  return g;
}

GorensteinResult gorenstein_check(const FiniteFlatAlgebra& t, int trials, std::uint64_t seed) {
  const std::size_t n = t.rank();
  std::vector<Vector> candidates;
  for (std::size_t i = 0; i < n; ++i) candidates.push_back(t.basis_vector(i));
  candidates.push_back(Vector(n, Rational(1)));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int k = 0; k < trials; ++k) {
    Vector v(n);
    for (auto& x : v) x = coef(rng);
    candidates.push_back(std::move(v));
  }
  for (const auto& phi : candidates)
    if (all_units(gorenstein_gram(t, phi), t.prime()))
      return GorensteinResult{GorensteinVerdict::Gorenstein, phi};
  return {};
}

HidaFactorization check_hida_factorization(const BaseChangeDatum& d, int trials) {
  HidaFactorization r;
  r.eta_lambda_prime = eta(d.source, d.lambda_prime());
  r.eta_lambda = eta(d.target, d.lambda);
  r.eta_sharp = eta_sharp(d);
  r.equality_expected =
      theta_surjective_over_o(d) &&
      gorenstein_check(d.source, trials).verdict == GorensteinVerdict::Gorenstein &&
      gorenstein_check(d.target, trials).verdict == GorensteinVerdict::Gorenstein;
  return r;
}

LinearBCReport check_linear_bc(const BaseChangeDatum& d, const AlgebraModule& m, const Vector& phi,
                               const Vector& delta) {
  const unsigned long p = d.source.prime();
  if (m.rank != d.source.rank())
    throw Error(ErrorKind::PreconditionFailed, "M_K is not free of rank one over T'_K");
  if (phi.size() != m.rank || delta.size() != m.rank)
    throw Error(ErrorKind::InvalidArgument, "vector shape");
  const Matrix e_theta = m.action_of(theta_idempotent(d));
  const Matrix sharp = Matrix::identity(m.rank) - e_theta;
  if (!is_zero(sharp.transpose() * phi))
    throw Error(ErrorKind::PreconditionFailed, "Phi does not vanish on the sharp part of M_K");
  const Matrix e_prime = m.action_of(idempotent_for_character(d.source, d.lambda_prime()));
  bool integral = true;
  for (const auto& x : delta) integral = integral && is_p_integral(x, p);
  if (!integral || e_prime * delta != delta)
    throw Error(ErrorKind::PreconditionFailed, "delta is not in the lambda'-part of M");
  LinearBCReport r;
  r.eta_sharp_dual = eta_sharp_of_module(d, dual_module(m));
  r.phi_delta_valuation = valuation(dot(phi, delta), p);
  return r;
}

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const FiniteFlatAlgebra& t) {
  nlohmann::json triples = nlohmann::json::array();
  const std::size_t n = t.rank();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (t.constant(i, j, k) != 0) triples.push_back({i, j, k, fraction(t.constant(i, j, k))});
  nlohmann::json unit = nlohmann::json::array();
  for (const auto& x : t.unit()) unit.push_back(fraction(x));
  return {{"rank", n}, {"prime", t.prime()}, {"structure_constants", triples}, {"unit", unit}};
}

nlohmann::json to_json(const Character& c) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : c.values) v.push_back(fraction(x));
  return {{"values", v}};
}

nlohmann::json to_json(const BaseChangeDatum& d) {
  nlohmann::json theta = nlohmann::json::array();
  for (std::size_t i = 0; i < d.theta.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < d.theta.cols(); ++j) row.push_back(fraction(d.theta(i, j)));
    theta.push_back(row);
  }
  return {{"source", to_json(d.source)},
          {"target", to_json(d.target)},
          {"theta", theta},
          {"lambda", to_json(d.lambda)}};
}

FiniteFlatAlgebra algebra_from_json(const nlohmann::json& j) {
  const std::size_t n = j.at("rank").get<std::size_t>();
  std::vector<Rational> c(n * n * n);
  for (const auto& e : j.at("structure_constants")) {
    const auto i = e.at(0).get<std::size_t>(), jj = e.at(1).get<std::size_t>(),
               k = e.at(2).get<std::size_t>();
    if (i >= n || jj >= n || k >= n) throw Error(ErrorKind::InvalidArgument, "index out of range");
    c[(i * n + jj) * n + k] = parse_fraction(e.at(3).get<std::string>());
  }
  Vector unit;
  for (const auto& x : j.at("unit")) unit.push_back(parse_fraction(x.get<std::string>()));
  return FiniteFlatAlgebra(n, std::move(c), std::move(unit), j.at("prime").get<unsigned long>());
}

Character character_from_json(const nlohmann::json& j) {
  Character c;
  for (const auto& x : j.at("values")) c.values.push_back(parse_fraction(x.get<std::string>()));
  return c;
}

BaseChangeDatum datum_from_json(const nlohmann::json& j) {
  auto source = algebra_from_json(j.at("source"));
  auto target = algebra_from_json(j.at("target"));
  Matrix theta(target.rank(), source.rank());
  const auto& rows = j.at("theta");
  if (rows.size() != target.rank()) throw Error(ErrorKind::InvalidArgument, "theta shape");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != source.rank()) throw Error(ErrorKind::InvalidArgument, "theta shape");
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      theta(i, k) = parse_fraction(rows[i][k].get<std::string>());
  }
  BaseChangeDatum d{std::move(source), std::move(target), std::move(theta),
                    character_from_json(j.at("lambda"))};
  validate_datum(d);
  return d;
}

}  // namespace congrua
