#pragma once

// The imprimitive adjoint L-function L(Ad f ⊗ α, s) of a rational newform on
// Γ₀(N), N squarefree, twisted by a quadratic character, evaluated at s = 1
// through an approximate functional equation.

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "congrua/dvr.hpp"
#include "congrua/modsym.hpp"

namespace congrua {

// The Kronecker character (d/·) of a fundamental discriminant d (d = 1 is
// the trivial character). Odd exactly when d < 0.
class QuadraticCharacter {
 public:
  // Throws NotPrimitive unless d is 1 or a fundamental discriminant.
  explicit QuadraticCharacter(long discriminant);
  long discriminant() const { return d_; }
  long conductor() const { return d_ < 0 ? -d_ : d_; }
  bool even() const { return d_ > 0; }
  int parity() const { return even() ? 0 : 1; }
  int operator()(long n) const;

 private:
  long d_;
};

bool is_fundamental_discriminant(long d);

// Γ_R(s) = π^(−s/2)Γ(s/2), Γ_C(s) = 2(2π)^(−s)Γ(s), real s.
double gamma_r(double s);
double gamma_c(double s);
// Γ(Ad f ⊗ α, s) = Γ_C(s + k − 1)Γ_R(s + ν); PoleHit at poles.
double gamma_factor(int k, int nu, double s);

std::complex<double> gauss_sum(const QuadraticCharacter& alpha);

// Smallest-denominator continued-fraction convergent p/q with q ≤
// max_denominator and |x − p/q| ≤ error.
std::optional<std::pair<long, long>> detect_rational(double x, long max_denominator, double error);

enum class LocalType { Unramified, PrincipalSeries, Special };

// Coefficients b_n of L(Ad f ⊗ α, s) = Σ b_n n^(−s), normalized so the
// unramified Satake data are (α_ℓ/β_ℓ, 1, β_ℓ/α_ℓ).
class AdjointDirichletSeries {
 public:
  // a[1..] is the q-expansion of f. Throws UnsupportedLocalType when ℓ² | N
  // and PreconditionFailed when gcd(N, D) ≠ 1.
  AdjointDirichletSeries(long level, int weight, const std::vector<Integer>& a, QuadraticCharacter alpha);

  long level() const { return level_; }
  int weight() const { return weight_; }
  const QuadraticCharacter& twist() const { return alpha_; }
  LocalType local_type(long ell) const;
  // N²|D|³
  double conductor() const;
  // b_1..b_n; needs a_ℓ for ℓ ≤ n.
  std::vector<double> coefficients(std::size_t n) const;
  std::size_t available() const { return a_.size() - 1; }

 private:
  long level_;
  int weight_;
  std::vector<Integer> a_;
  QuadraticCharacter alpha_;
};

struct LValueOptions {
  double target_error = 1e-10;      // relative
  std::size_t budget = 400000;      // largest coefficient index allowed
  long max_denominator = 1000000;
  double detection_error = 1e-8;
  std::vector<unsigned long> primes;  // valuations to report
  // Optional q-expansion store (a[0] unused), reused when long enough and
  // extended otherwise.
  std::vector<Integer>* coefficients = nullptr;
};

struct LValueResult {
  double value = 0;          // L(Ad f ⊗ α, 1)
  double completed = 0;      // Λ(1) = q^(1/2)Γ(Ad f ⊗ α, 1)L(1)
  double normalized = 0;     // G(ᾱ)²Γ(Ad f⊗α, 1)L(1)/|Ω⁺Ω⁻|
  double classical = 0;      // L(1)/(π^(k+1)|Ω⁺Ω⁻|)
  std::optional<std::pair<long, long>> rational;  // detected from `normalized`
  std::optional<std::pair<long, long>> classical_rational;
  std::map<unsigned long, int> valuations;        // of `rational`
  std::map<unsigned long, int> classical_valuations;
  double error = 0;          // heuristic relative error
  double sign = 0;           // fitted root number
  double sign_residual = 0;  // |sign − ±1|
  std::size_t terms = 0;
  double conductor = 0;
  ManinPeriods periods;
};

// Throws SlowConvergence when the series needs more than `budget`
// coefficients or the two evaluations disagree beyond the target.
LValueResult adjoint_l_value(const ModularSymbolSpace& s, const EigenformData& f, const QuadraticCharacter& alpha,
                             const LValueOptions& options = {});

enum class PredictionFlag { Predicted, NotPredicted, ConditionViolated, Undetected, Unavailable, Failed };
std::string to_string(PredictionFlag f);

struct PredictionEntry {
  long discriminant = 0;
  unsigned long p = 0;
  PredictionFlag flag = PredictionFlag::Failed;
  int valuation = 0;
  std::string note;
};

struct CongruencePrimeReport {
  std::string form;
  std::vector<PredictionEntry> entries;
  std::map<long, LValueResult> values;  // per discriminant that evaluated
};

// Real quadratic D: p is predicted when v_p(L*(Ad f ⊗ α_D)) ≥ 1. Imaginary D:
// only the raw value is reported. Failures are recorded per entry.
CongruencePrimeReport congruence_prime_report(const ModularSymbolSpace& s, const EigenformData& f,
                                              const std::vector<long>& discriminants,
                                              const std::vector<unsigned long>& primes,
                                              const LValueOptions& options = {});

}  // namespace congrua
