#pragma once

// Finite flat O-algebras, characters, congruence modules and base change.
// Algebras are free O-modules with a chosen basis; elements are coordinate
// vectors. Modules are O^n with one action matrix per algebra basis element
// acting on column vectors.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "congrua/dvr.hpp"

namespace congrua {

class FiniteFlatAlgebra {
 public:
  // constants[(i * n + j) * n + k] is the coefficient of e_k in e_i·e_j.
  // Throws InvalidArgument unless the data define a commutative, associative,
  // unital algebra with p-integral structure constants.
  FiniteFlatAlgebra(std::size_t rank, std::vector<Rational> constants, Vector unit,
                    unsigned long p);

  // O^n with coordinatewise product.
  static FiniteFlatAlgebra split(std::size_t n, unsigned long p);
  // The O-order spanned by the given vectors inside the split algebra K^r.
  // The vectors must be linearly independent and closed under products.
  static FiniteFlatAlgebra suborder(const std::vector<Vector>& basis, unsigned long p);

  std::size_t rank() const { return n_; }
  unsigned long prime() const { return p_; }
  const Rational& constant(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * n_ + j) * n_ + k];
  }
  const std::vector<Rational>& constants() const { return c_; }
  const Vector& unit() const { return unit_; }
  Vector basis_vector(std::size_t i) const;

  Vector multiply(const Vector& x, const Vector& y) const;
  // Matrix of y ↦ x·y.
  Matrix multiplication_matrix(const Vector& x) const;

 private:
  std::size_t n_;
  std::vector<Rational> c_;
  Vector unit_;
  unsigned long p_;
};

// An O-algebra homomorphism T → O, given by its values on the basis.
struct Character {
  Vector values;

  Rational operator()(const Vector& x) const { return dot(values, x); }
};

// Throws InvalidArgument if λ is not a ring homomorphism into O.
void validate_character(const FiniteFlatAlgebra& t, const Character& lambda);

struct AlgebraModule {
  std::size_t rank = 0;
  std::vector<Matrix> action;

  Matrix action_of(const Vector& t) const;
};

AlgebraModule regular_module(const FiniteFlatAlgebra& t);
// Hom_O(M, O) with (t·φ)(m) = φ(t·m).
AlgebraModule dual_module(const AlgebraModule& m);
AlgebraModule direct_sum(const AlgebraModule& a, const AlgebraModule& b);
// Throws InvalidArgument if the action is not a T-module structure.
void validate_module(const FiniteFlatAlgebra& t, const AlgebraModule& m);

struct PerfectPairing {
  AlgebraModule left;
  AlgebraModule right;
  Matrix gram;
};

// Throws InvalidArgument unless gram is perfect and T-bilinear.
void validate_pairing(const FiniteFlatAlgebra& t, const PerfectPairing& pairing);

struct BaseChangeDatum {
  FiniteFlatAlgebra source;  // T′
  FiniteFlatAlgebra target;  // T
  Matrix theta;              // rank T × rank T′
  Character lambda;          // on T

  Character lambda_prime() const;
};

// Throws InvalidArgument unless θ is a unital ring homomorphism, surjective
// after tensoring with K, and λ is a character of T.
void validate_datum(const BaseChangeDatum& d);

// The idempotent e_λ of T_K. Throws NoIdempotent if the λ-eigenspace of T_K
// is not a line on which λ is nonzero.
Vector idempotent_for_character(const FiniteFlatAlgebra& t, const Character& lambda);

// Ideal of O generated by the values of a functional on a lattice basis.
PIdeal ideal_of_values(const Vector& functional, const std::vector<Vector>& lattice,
                       unsigned long p);

// Lattice basis of Ann_T(S) for a set S of algebra elements.
std::vector<Vector> annihilator(const FiniteFlatAlgebra& t, const std::vector<Vector>& s);
// Saturated lattice basis of ker λ.
std::vector<Vector> kernel_lattice(const Matrix& map, unsigned long p);

// λ(Ann_T(ker λ)), cross-checked against the denominator of e_λ.
PIdeal eta(const FiniteFlatAlgebra& t, const Character& lambda);

// M^λ / M_λ, with M^λ = e_λ·M and M_λ = M ∩ e_λ·M_K.
FiniteModulePresentation c0_module(const FiniteFlatAlgebra& t, const AlgebraModule& m,
                                   const Character& lambda);
// Fitting ideal of c0_module.
PIdeal eta_of_module(const FiniteFlatAlgebra& t, const AlgebraModule& m, const Character& lambda);
// Lattice basis of M_λ.
std::vector<Vector> lambda_part(const FiniteFlatAlgebra& t, const AlgebraModule& m,
                                const Character& lambda);

struct DualityReport {
  PIdeal left;
  PIdeal right;
  PIdeal pairing;  // ([δ₁, δ₂])
  bool holds() const { return left == right && right == pairing; }
};
// Throws RankNotOne when either λ-part has rank other than one.
DualityReport duality_transfer(const FiniteFlatAlgebra& t, const PerfectPairing& pairing,
                               const Character& lambda);

// λ′(Ann_{T′}(ker θ)).
PIdeal eta_sharp(const BaseChangeDatum& d);

// e_θ ∈ T′_K: θ(e_θ) = 1 and e_θ·ker θ = 0.
Vector theta_idempotent(const BaseChangeDatum& d);

struct BCFactorization {
  PIdeal eta_lambda_prime;  // η_{λ′}(M)
  PIdeal eta_lambda_mt;     // η_λ(M_T)
  PIdeal eta_sharp;         // η♯_λ(M)
  bool holds() const { return eta_lambda_prime == eta_lambda_mt * eta_sharp; }
};
BCFactorization check_bc_factorization(const BaseChangeDatum& d, const AlgebraModule& m);
// η♯_λ(M) = Fitt(e_{λ′}M / e_{λ′}M_T).
PIdeal eta_sharp_of_module(const BaseChangeDatum& d, const AlgebraModule& m);

enum class GorensteinVerdict { Gorenstein, Inconclusive };

struct GorensteinResult {
  GorensteinVerdict verdict = GorensteinVerdict::Inconclusive;
  std::optional<Vector> generator;  // φ with unit Gram determinant
};
// One-sided search for φ ∈ Hom_O(T, O) with t ↦ t·φ an isomorphism.
GorensteinResult gorenstein_check(const FiniteFlatAlgebra& t, int trials,
                                  std::uint64_t seed = 0x5eed);

// Matrix of t ↦ t·φ in dual coordinates: G[i][j] = φ(e_i e_j).
Matrix gorenstein_gram(const FiniteFlatAlgebra& t, const Vector& phi);

struct HidaFactorization {
  PIdeal eta_lambda_prime;
  PIdeal eta_lambda;
  PIdeal eta_sharp;
  bool equality_expected = false;  // both Gorenstein and θ surjective over O
  bool divisibility() const { return eta_lambda_prime.contains(eta_lambda * eta_sharp); }
  bool equality() const { return eta_lambda_prime == eta_lambda * eta_sharp; }
  bool holds() const { return divisibility() && (!equality_expected || equality()); }
};
HidaFactorization check_hida_factorization(const BaseChangeDatum& d, int gorenstein_trials = 64);

bool theta_surjective_over_o(const BaseChangeDatum& d);

struct LinearBCReport {
  PIdeal eta_sharp_dual;  // η♯_λ(M*)
  int phi_delta_valuation = kInfiniteValuation;
  bool holds() const {
    return eta_sharp_dual.is_zero() ? phi_delta_valuation == kInfiniteValuation
                                    : phi_delta_valuation >= eta_sharp_dual.valuation();
  }
};
// Φ is a vector of M* in dual coordinates, δ ∈ M_{λ′}. Throws
// PreconditionFailed naming the failed clause.
LinearBCReport check_linear_bc(const BaseChangeDatum& d, const AlgebraModule& m, const Vector& phi,
                               const Vector& delta);

// Canonical JSON with exact fraction strings.
nlohmann::json to_json(const FiniteFlatAlgebra& t);
nlohmann::json to_json(const Character& c);
nlohmann::json to_json(const BaseChangeDatum& d);
FiniteFlatAlgebra algebra_from_json(const nlohmann::json& j);
Character character_from_json(const nlohmann::json& j);
BaseChangeDatum datum_from_json(const nlohmann::json& j);

}  // namespace congrua
