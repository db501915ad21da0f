#include "congrua/cotangent.hpp"

namespace congrua {

namespace {

FiniteModulePresentation zero_or_quotient(const std::vector<Vector>& outer,
                                          const std::vector<Vector>& inner, std::size_t n,
                                          unsigned long p) {
  if (outer.empty()) return FiniteModulePresentation::zero_module(p);
  return quotient_presentation(outer, inner, n, p);
}

PIdeal fitting_or_zero(const FiniteModulePresentation& m) {
  return m.is_finite() ? fitting_ideal(m) : PIdeal::zero();
}

bool spans_everything(const std::vector<Vector>& basis, std::size_t n, unsigned long p) {
  if (basis.size() != n) return false;
  const SmithForm s = snf(Matrix::from_columns(basis, n), p);
  for (int v : s.diagonal_valuations)
    if (v != 0) return false;
  return true;
}

// Q[x]/I with a reduced Gröbner basis and its standard monomials.
struct Quotient {
  RationalField field;
  std::vector<FieldPoly<RationalField>> basis;
  std::vector<Monomial> standard;
  std::size_t nvars;

  Vector to_vector(const FieldPoly<RationalField>& f) const {
    const auto r = normal_form(field, f, basis);
    Vector v(standard.size());
    for (const auto& [m, c] : r.terms) {
      const auto it = std::find(standard.begin(), standard.end(), m);
      v[static_cast<std::size_t>(it - standard.begin())] = c;
    }
    return v;
  }
  FieldPoly<RationalField> to_poly(const Vector& v) const {
    FieldPoly<RationalField> f;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0) f.terms.emplace(standard[i], v[i]);
    return f;
  }
  Vector times(const Vector& a, const Vector& b) const {
    const auto pa = to_poly(a), pb = to_poly(b);
    FieldPoly<RationalField> prod;
    for (const auto& [m, c] : pb.terms) axpy(field, prod, c, m, pa);
    return to_vector(prod);
  }
  Vector monomial(const Monomial& m) const {
    FieldPoly<RationalField> f;
    f.terms.emplace(m, Rational(1));
    return to_vector(f);
  }
};

std::optional<CICover> try_cover(const std::vector<Polynomial>& regular, const Polynomial& excluded,
                                 const AlgebraPresentation& pres, const Character& lambda) {
  const unsigned long p = pres.target.prime();
  const std::size_t g = pres.num_vars;
  Quotient q{RationalField{}, {}, {}, g};
  std::vector<FieldPoly<RationalField>> input;
  for (const auto& f : regular) input.push_back(convert(q.field, f));
  q.basis = groebner_basis(q.field, input);
  auto standard = standard_monomials(q.basis, g);
  if (!standard || standard->empty()) return std::nullopt;
  q.standard = *standard;
  const std::size_t d = q.standard.size();

  // Flatness and locality are read off the reduction mod p.
  const PrimeField fp{p};
  std::vector<FieldPoly<PrimeField>> input_p;
  for (const auto& f : regular) input_p.push_back(convert(fp, f));
  const auto gp = groebner_basis(fp, input_p);
  const auto standard_p = standard_monomials(gp, g);
  if (!standard_p || standard_p->size() != d) return std::nullopt;
  for (std::size_t i = 0; i < g; ++i) {
    FieldPoly<PrimeField> xi;
    Monomial m(g, 0);
    m[i] = static_cast<int>(d);
    xi.terms.emplace(m, 1);
    if (!normal_form(fp, xi, gp).is_zero()) return std::nullopt;
  }

  // T₀ is the O-span of all monomials inside Q[x]/I.
  std::vector<Vector> lattice = lattice_basis({q.monomial(Monomial(g, 0))}, d, p);
  for (int round = 0;; ++round) {
    if (round > 64) return std::nullopt;
    std::vector<Vector> gens = lattice;
    for (const auto& b : lattice)
      for (std::size_t i = 0; i < g; ++i) {
        Monomial m(g, 0);
        m[i] = 1;
        gens.push_back(q.times(b, q.monomial(m)));
      }
    auto next = lattice_basis(gens, d, p);
    bool grew = next.size() != lattice.size();
    for (const auto& v : next) {
      if (grew) break;
      for (const auto& c : coordinates(lattice, v)) grew = grew || !is_p_integral(c, p);
    }
    if (!grew) break;
    lattice = std::move(next);
  }
  if (lattice.size() != d) return std::nullopt;

  std::vector<Rational> constants(d * d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const Vector c = coordinates(lattice, q.times(lattice[i], lattice[j]));
      for (std::size_t k = 0; k < d; ++k)
        constants[(i * d + j) * d + k] = constants[(j * d + i) * d + k] = c[k];
    }
  FiniteFlatAlgebra t0(d, std::move(constants), coordinates(lattice, q.monomial(Monomial(g, 0))), p);

  Vector point;
  for (const auto& x : pres.images) point.push_back(lambda(x));
  Vector on_standard;
  for (const auto& m : q.standard) {
    Rational v = 1;
    for (std::size_t i = 0; i < g; ++i)
      for (int e = 0; e < m[i]; ++e) v *= point[i];
    on_standard.push_back(v);
  }
  Character lambda0;
  for (const auto& b : lattice) lambda0.values.push_back(dot(on_standard, b));
  validate_character(t0, lambda0);
  // T₀ must be reduced along λ₀, otherwise C1(T₀) has positive rank.
  if (c1(t0, lambda0).fitting.is_zero()) return std::nullopt;
  const Vector f = coordinates(lattice, q.to_vector(convert(q.field, excluded)));
  return CICover{regular, excluded, std::move(t0), std::move(lambda0), f};
}

}  // namespace

C1Result c1(const FiniteFlatAlgebra& t, const Character& lambda) {
  const unsigned long p = t.prime();
  const auto prime = kernel_lattice(Matrix::from_rows({lambda.values}, t.rank()), p);
  std::vector<Vector> squares;
  for (std::size_t i = 0; i < prime.size(); ++i)
    for (std::size_t j = i; j < prime.size(); ++j) squares.push_back(t.multiply(prime[i], prime[j]));
  auto pres = zero_or_quotient(prime, squares, t.rank(), p);
  const PIdeal fit = fitting_or_zero(pres);
  return C1Result{std::move(pres), fit};
}

LciReport lci_criterion(const FiniteFlatAlgebra& t, const Character& lambda) {
  LciReport r{LciVerdict::NotCI, eta(t, lambda), c1(t, lambda).fitting};
  if (r.eta == r.fitting_c1) r.verdict = LciVerdict::CompleteIntersection;
  return r;
}

PIdeal wiles_defect(const FiniteFlatAlgebra& t, const Character& lambda) {
  const auto r = lci_criterion(t, lambda);
  if (r.eta.is_zero()) throw Error(ErrorKind::Degenerate, "congruence ideal is zero");
  if (r.fitting_c1.is_zero()) return PIdeal::zero();
  return PIdeal::power(r.fitting_c1.valuation() - r.eta.valuation());
}

Vector evaluate_in(const FiniteFlatAlgebra& t, const Polynomial& f, const std::vector<Vector>& xs) {
  Vector out(t.rank());
  for (const auto& [m, c] : f.terms()) {
    Vector term = t.unit();
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int e = 0; e < m[i]; ++e) term = t.multiply(term, xs[i]);
    out = add(out, scale(term, c));
  }
  return out;
}

void validate_presentation(const AlgebraPresentation& pres) {
  const auto& t = pres.target;
  if (pres.relations.size() != pres.num_vars + 1)
    throw Error(ErrorKind::InvalidArgument, "a presentation needs exactly g + 1 relations");
  if (pres.images.size() != pres.num_vars)
    throw Error(ErrorKind::InvalidArgument, "one image per variable");
  for (const auto& f : pres.relations) {
    if (f.num_vars() != pres.num_vars) throw Error(ErrorKind::InvalidArgument, "relation arity");
    for (const auto& [m, c] : f.terms())
      if (!is_p_integral(c, t.prime()))
        throw Error(ErrorKind::InvalidArgument, "relations must have coefficients in O");
    if (!is_zero(evaluate_in(t, f, pres.images)))
      throw Error(ErrorKind::InvalidArgument, "relation does not vanish in the target: " + f.to_string());
  }
  std::vector<Vector> lattice = lattice_basis({t.unit()}, t.rank(), t.prime());
  for (std::size_t round = 0; round <= t.rank(); ++round) {
    std::vector<Vector> gens = lattice;
    for (const auto& b : lattice)
      for (const auto& x : pres.images) gens.push_back(t.multiply(b, x));
    lattice = lattice_basis(gens, t.rank(), t.prime());
  }
  if (!spans_everything(lattice, t.rank(), t.prime()))
    throw Error(ErrorKind::InvalidArgument, "the images do not generate the target");
}

std::optional<CICover> find_ci_cover(const AlgebraPresentation& pres, const Character& lambda) {
  validate_presentation(pres);
  const std::size_t g = pres.num_vars;
  const auto& rel = pres.relations;
  // Phase 0 drops one relation; phase 1 also adds c·f_excluded to the others.
  for (int phase = 0; phase < 2; ++phase)
    for (std::size_t e = 0; e <= g; ++e) {
      std::vector<int> c(g, phase == 0 ? 0 : -1);
      while (true) {
        bool trivial = true;
        for (int x : c) trivial = trivial && x == 0;
        if (phase == 0 || !trivial) {
          std::vector<Polynomial> regular;
          std::size_t k = 0;
          for (std::size_t j = 0; j <= g; ++j) {
            if (j == e) continue;
            regular.push_back(rel[j] + rel[e] * Rational(c[k++]));
          }
          if (auto cover = try_cover(regular, rel[e], pres, lambda)) return cover;
        }
        if (phase == 0) break;
        std::size_t i = 0;
        while (i < g && ++c[i] > 1) c[i++] = -1;
        if (i == g) break;
      }
    }
  return std::nullopt;
}

PIdeal defect_via_cotangent_complex(const AlgebraPresentation& pres, const Character& lambda) {
  const auto cover = find_ci_cover(pres, lambda);
  if (!cover) throw Error(ErrorKind::NoCICover, "no finite flat local complete intersection cover found");
  // T₀/(f) must be the target: (f) saturated of corank rank T.
  const auto& t0 = cover->algebra;
  std::vector<Vector> multiples;
  for (std::size_t i = 0; i < t0.rank(); ++i) multiples.push_back(t0.multiply(cover->f, t0.basis_vector(i)));
  const auto ideal = lattice_basis(multiples, t0.rank(), t0.prime());
  if (ideal.size() + pres.target.rank() != t0.rank() ||
      zero_or_quotient(saturate(ideal, t0.rank(), t0.prime()), ideal, t0.rank(), t0.prime()).length() != 0)
    throw Error(ErrorKind::InvalidArgument, "the relations do not present the target");
  const PIdeal c1_t = c1(pres.target, lambda).fitting;
  const PIdeal c1_t0 = c1(cover->algebra, cover->lambda).fitting;
  const PIdeal ann = ideal_of_values(cover->lambda.values, annihilator(cover->algebra, {cover->f}),
                                     pres.target.prime());
  if (c1_t.is_zero() || c1_t0.is_zero() || ann.is_zero())
    throw Error(ErrorKind::Degenerate, "an ideal in the cotangent identity vanishes");
  return PIdeal::power(c1_t.valuation() + ann.valuation() - c1_t0.valuation());
}

FiniteModulePresentation c1_sharp(const BaseChangeDatum& d) {
  const auto& s = d.source;
  const unsigned long p = s.prime();
  const auto ker = kernel_lattice(d.theta, p);
  const auto prime = kernel_lattice(Matrix::from_rows({d.lambda_prime().values}, s.rank()), p);
  std::vector<Vector> products;
  for (const auto& a : prime)
    for (const auto& k : ker) products.push_back(s.multiply(a, k));
  return zero_or_quotient(ker, products, s.rank(), p);
}

C1SequenceReport check_c1_exact_sequence(const BaseChangeDatum& d) {
  C1SequenceReport r;
  r.c1_source = c1(d.source, d.lambda_prime()).fitting;
  r.c1_target = c1(d.target, d.lambda).fitting;
  r.c1_sharp = fitting_or_zero(c1_sharp(d));
  r.target_is_ci = lci_criterion(d.target, d.lambda).verdict == LciVerdict::CompleteIntersection;
  return r;
}

nlohmann::json to_json(const AlgebraPresentation& pres) {
  nlohmann::json rels = nlohmann::json::array();
  for (const auto& f : pres.relations) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : f.terms()) terms.push_back({{"exponents", m}, {"coefficient", c.get_str()}});
    rels.push_back(terms);
  }
  nlohmann::json images = nlohmann::json::array();
  for (const auto& v : pres.images) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : v) row.push_back(x.get_str());
    images.push_back(row);
  }
  return {{"num_vars", pres.num_vars},
          {"relations", rels},
          {"target", to_json(pres.target)},
          {"images", images}};
}

}  // namespace congrua
