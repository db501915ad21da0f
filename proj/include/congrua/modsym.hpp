#pragma once

// Modular symbols for Γ₀(N) in even weight k ≥ 2, built from Manin symbols
// [X^i Y^(k−2−i), (c:d)]. Everything here is exact over Q; integral
// structures are Z-lattices inside the ambient Q-space.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "congrua/dvr.hpp"
#include "congrua/finalg.hpp"

namespace congrua {

using SparseVector = std::map<std::size_t, Rational>;

struct Mat2 {
  long a, b, c, d;
};

// P¹(Z/N): pairs (c, d) with gcd(c, d, N) = 1 up to units.
class P1List {
 public:
  explicit P1List(long n);
  long level() const { return n_; }
  std::size_t size() const { return reps_.size(); }
  // -1 when gcd(c, d, N) ≠ 1.
  long index(long c, long d) const;
  std::pair<long, long> element(std::size_t i) const { return reps_[i]; }

 private:
  long n_;
  std::vector<long> table_;
  std::vector<std::pair<long, long>> reps_;
};

// Cremona's continued-fraction Heilbronn matrices for a prime ℓ.
std::vector<Mat2> heilbronn_cremona(long ell);
// Merel's set ad − bc = n, a > b ≥ 0, d > c ≥ 0. Quadratic in n.
std::vector<Mat2> heilbronn_merel(long n);

// Coefficients of P(aX + bY, cX + dY) for P = X^i Y^(deg−i), indexed by the
// exponent of X.
std::vector<Integer> transform_monomial(int i, int degree, const Mat2& m);

// Γ₀(N)-class of the cusp u/v (gcd(u, v) = 1).
class CuspClasses {
 public:
  explicit CuspClasses(long n);
  std::size_t size() const { return count_; }
  std::size_t index(long u, long v);

 private:
  long n_;
  std::vector<long> units_;
  std::map<std::pair<long, long>, std::size_t> keys_;
  std::map<std::pair<long, long>, std::size_t> cache_;
  std::size_t count_ = 0;
};

std::size_t cusp_count(long n);

// A lift of (c:d) to a matrix in SL₂(Z) with bottom row ≡ (c, d) mod N.
Mat2 lift_to_sl2(long c, long d, long n);

class ModularSymbolSpace {
 public:
  ModularSymbolSpace(long level, int weight);

  long level() const { return n_; }
  int weight() const { return k_; }
  const P1List& p1() const { return p1_; }
  std::size_t num_symbols() const { return exprs_.size(); }
  // dim_Q of the ambient space M_k.
  std::size_t dimension() const { return gens_.size(); }
  std::size_t num_cusps() const { return cusps_; }

  std::size_t symbol_index(int i, std::size_t p1index) const;
  // Ambient coordinates of a Manin symbol.
  const SparseVector& reduce(std::size_t symbol) const { return exprs_[symbol]; }
  // [P, (c:d)] for P given by coefficients of X^i Y^(k−2−i); zero when (c:d) ∉ P¹.
  Vector manin_symbol(const std::vector<Integer>& poly, long c, long d) const;
  // The Manin symbol standing for each ambient basis vector.
  std::size_t generator_symbol(std::size_t g) const { return gens_[g]; }

  // Matrices act on ambient coordinate columns.
  const Matrix& boundary() const { return boundary_; }
  const Matrix& star() const { return star_; }
  std::size_t cuspidal_dimension() const;

  // Hecke operator on the ambient space. Cremona's matrices for primes ℓ ∤ N,
  // Merel's set otherwise. Cached.
  const Matrix& hecke(long n) const;
  Matrix hecke_merel(long n) const;
  // T_n applied to one Manin symbol, in ambient coordinates.
  SparseVector hecke_on_symbol(long n, std::size_t symbol) const;
  // ψ(T_n symbol) for a functional ψ given on every Manin symbol; avoids the
  // sparse arithmetic when only one coordinate is wanted.
  Integer hecke_functional(long n, std::size_t symbol, const std::vector<Integer>& psi) const;
  // Values of a functional on the ambient space at every Manin symbol.
  std::vector<Rational> on_symbols(const Vector& phi) const;

 private:
  SparseVector apply_heilbronn(const std::vector<Mat2>& hs, std::size_t symbol) const;
  SparseVector boundary_of(std::size_t symbol, CuspClasses& cc) const;

  long n_;
  int k_;
  P1List p1_;
  std::vector<SparseVector> exprs_;
  std::vector<std::size_t> gens_;
  std::size_t cusps_ = 0;
  Matrix boundary_;
  Matrix star_;
  mutable std::map<long, Matrix> hecke_cache_;
};

std::shared_ptr<const ModularSymbolSpace> build_space(long level, int weight);

// ---------------------------------------------------------------- Z-lattices

// Z-basis (Hermite normal form rows) of the Z-span of rational vectors.
std::vector<Vector> z_lattice_basis(const std::vector<Vector>& generators, std::size_t n);
// Z-basis of {x ∈ Z^n : A·x = 0} for an integral matrix A.
std::vector<Vector> z_kernel(const Matrix& a);
// Matrix of op on the span of basis (op·B = B·R); throws if not stable.
Matrix restrict_to(const Matrix& op, const std::vector<Vector>& basis);

// ---------------------------------------------------------------- lattices

// M_Z is the Z-span of all Manin symbols, S_Z = M_Z ∩ ker δ and
// S^± = S_Z ∩ ker(ι ∓ 1). Bases are in ambient coordinates.
struct CuspidalLattices {
  std::vector<Vector> ambient;
  std::vector<Vector> cuspidal;
  std::vector<Vector> plus;
  std::vector<Vector> minus;
};

CuspidalLattices cuspidal_lattices(const ModularSymbolSpace& s);

// ---------------------------------------------------------------- eigenforms

struct EigenformData {
  long level = 0;
  int weight = 0;
  std::string label;
  // Dimension of the eigenspace in S^+; 1 exactly for newforms.
  std::size_t multiplicity = 0;
  std::map<long, Integer> a;  // a_ℓ for primes ℓ ∤ N up to the search bound
  std::vector<Vector> plus_space;  // Q-basis of the eigenspace, S^+ coordinates
  std::vector<Vector> minus_space;
  // Newforms only: primitive generators of S^±[λ] and eigen-functionals on
  // the ambient space with φ^± ∘ ι = ±φ^± and φ^±(S^±_Z) = Z.
  Vector delta_plus, delta_minus;
  Vector phi_plus, phi_minus;

  bool newform() const { return multiplicity == 1; }
};

struct RationalEigensystems {
  std::shared_ptr<const ModularSymbolSpace> space;
  CuspidalLattices lattices;
  long bound = 0;
  std::vector<EigenformData> forms;
  // Dimension of the part of S^+ whose eigenvalues are not all rational.
  std::size_t irrational_dimension = 0;
  std::map<long, Matrix> plus_hecke;  // T_ℓ on S^± in lattice coordinates
  std::map<long, Matrix> minus_hecke;
};

// Splits S^+ by T_ℓ for primes ℓ ∤ N up to max(bound, Sturm bound, 20).
RationalEigensystems rational_eigensystems(std::shared_ptr<const ModularSymbolSpace> s, long bound = 0);

// a_ℓ of a newform for any prime ℓ, from φ^+(T_ℓ x)/φ^+(x).
Integer eigenvalue(const ModularSymbolSpace& s, const EigenformData& f, long ell);
// a_1..a_n (index 0 unused) from prime eigenvalues.
std::vector<Integer> q_expansion(const ModularSymbolSpace& s, const EigenformData& f, std::size_t n);

// ---------------------------------------------------------------- blocks

// a_ℓ ≡ 1 + ℓ^(k−1) mod p for every prime ℓ ∤ Np up to the search bound.
bool is_eisenstein_mod(const EigenformData& f, unsigned long p);

// The m-local block of S^± at the residual eigensystem of f. T is the
// Z_(p)-algebra generated by T_ℓ (ℓ ∤ N, ℓ up to the search bound), realized
// inside ∏ Z_(p) over the rational eigensystems of the block.
struct HeckeLattice {
  unsigned long p = 0;
  FiniteFlatAlgebra algebra;
  Character lambda;
  AlgebraModule plus;
  AlgebraModule minus;
  std::vector<Vector> plus_basis;   // ambient coordinates
  std::vector<Vector> minus_basis;
  std::vector<std::string> members;  // labels, in the coordinate order of T_K
  std::size_t residual_dimension = 0;  // dim of the F_p generalized eigenspace in S^+
};

// Throws PreconditionFailed (p even, p | N, p ≤ k − 2), BlockNotFound (f is
// not a rational newform of the space), EisensteinIdeal, or Unsupported when
// the block contains eigensystems that are not rational.
HeckeLattice localize_at_eigenform(const RationalEigensystems& es, const EigenformData& f, unsigned long p);

// λ(Ann_T(ker λ)).
PIdeal congruence_number(const HeckeLattice& l);
// Fitting ideal of C0(H_m^+), checked against C0(H_m^−); the two agree when
// H^+ and H^− are in perfect Hecke-equivariant duality. Throws
// PairingDegenerate otherwise.
PIdeal cohomological_congruence_number(const HeckeLattice& l);
// H_m^+ ≅ T, witnessed by a cyclic generator (deterministic search).
bool verify_freeness(const HeckeLattice& l);

// min over primes ℓ ∤ N in both eigensystems of v_p(a_ℓ(f) − a_ℓ(g)).
int sturm_congruence_exponent(const EigenformData& f, const EigenformData& g, unsigned long p);

struct CongruentPair {
  std::string f, g;
  unsigned long p = 0;
  int eta = 0;       // v_p(η_f)
  int eta_coh = 0;   // v_p(η_f^coh)
  int oracle = 0;    // Sturm exponent
  bool free = false;
};

// Blocks consisting of exactly two rational newforms of multiplicity one.
std::vector<CongruentPair> congruent_pairs(const RationalEigensystems& es, unsigned long p);

// ---------------------------------------------------------------- periods

// P{∞, u/v} in ambient coordinates, via the continued fraction of u/v. P is
// given by coefficients of X^e Y^(k−2−e).
Vector path_from_infinity(const ModularSymbolSpace& s, const std::vector<Integer>& poly, long u, long v);

// Periods of ω_f = f(z)(X − zY)^(k−2)dz against the integral structure:
// ∫_x ω_f = Ω⁺·φ⁺(x) + Ω⁻·φ⁻(x) on modular symbols x, with Ω⁺ real and Ω⁻
// purely imaginary. Scaling φ^± by u divides Ω^± by u.
struct ManinPeriods {
  std::complex<double> plus;
  std::complex<double> minus;
  double residual = 0;  // relative residual of the least-squares fit
  double error = 0;     // relative change against a q-expansion twice as long
  std::size_t terms = 0;
  std::size_t cycles = 0;
};

// Throws PrecisionLoss if the fit residual or the truncation error exceeds
// the tolerance. `a` may be supplied to reuse a q-expansion (a[0] unused).
ManinPeriods manin_periods(const ModularSymbolSpace& s, const EigenformData& f, double precision = 1e-10,
                           std::vector<Integer> a = {});

bool is_prime(long n);
std::vector<long> primes_up_to(long n);
// k·[SL₂(Z) : Γ₀(N)]/12, rounded up.
long sturm_bound(long level, int weight);

}  // namespace congrua
