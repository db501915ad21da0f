#pragma once

// Exact linear algebra over Z_(p), the localization of the integers at an odd
// prime p. Scalars are GMP rationals; a scalar is p-integral when its reduced
// denominator is prime to p.

#include <climits>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "congrua/error.hpp"

namespace congrua {

using Integer = mpz_class;
using Rational = mpq_class;
using Vector = std::vector<Rational>;

inline constexpr int kInfiniteValuation = INT_MAX;

int valuation(const Integer& x, unsigned long p);
int valuation(const Rational& x, unsigned long p);
bool is_p_integral(const Rational& x, unsigned long p);
bool is_p_unit(const Rational& x, unsigned long p);
Rational p_power(unsigned long p, int exponent);

// An ideal of Z_(p): either p^e with e >= 0, or the zero ideal.
class PIdeal {
 public:
  PIdeal() : valuation_(0) {}

  static PIdeal unit() { return PIdeal(0); }
  static PIdeal power(int e);
  static PIdeal zero() { return PIdeal(std::nullopt); }
  // The ideal generated by a p-integral scalar.
  static PIdeal generated_by(const Rational& x, unsigned long p);

  bool is_zero() const { return !valuation_.has_value(); }
  // Throws Degenerate on the zero ideal.
  int valuation() const;
  // kInfiniteValuation for the zero ideal.
  int valuation_or_infinity() const { return valuation_.value_or(kInfiniteValuation); }

  PIdeal operator*(const PIdeal& other) const;
  // this ⊇ other
  bool contains(const PIdeal& other) const;
  bool operator==(const PIdeal& other) const = default;

  std::string to_string() const;

 private:
  explicit PIdeal(std::optional<int> v) : valuation_(v) {}
  std::optional<int> valuation_;
};

// Dense row-major matrix of rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_columns(const std::vector<Vector>& columns, std::size_t rows);
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const;
  Vector column(std::size_t j) const;
  std::vector<Vector> columns() const;

  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;
  Vector operator*(const Vector& v) const;
  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix scaled(const Rational& s) const;
  bool operator==(const Matrix& other) const = default;

  bool is_zero() const;
  bool is_p_integral(unsigned long p) const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scale(const Vector& a, const Rational& s);
Rational dot(const Vector& a, const Vector& b);
bool is_zero(const Vector& v);
// Minimum valuation over the coordinates.
int min_valuation(const Vector& v, unsigned long p);

struct SmithForm {
  Matrix U;
  Matrix D;
  Matrix V;
  // Valuations of D's diagonal, nondecreasing; kInfiniteValuation for zeros.
  std::vector<int> diagonal_valuations;
  std::size_t rank = 0;
};

// U·A·V = D with U, V invertible over Z_(p) and D diagonal with entries p^e.
// Pivot: minimal valuation in the remaining block, ties broken by the
// lexicographically smallest position.
SmithForm snf(const Matrix& a, unsigned long p);

std::size_t rank(const Matrix& a);
// Basis of the K-kernel of A (vectors x with A·x = 0).
std::vector<Vector> kernel(const Matrix& a);
// Exact solve of A·x = b; nullopt when inconsistent. Picks the solution with
// free variables set to zero.
std::optional<Vector> solve_linear(const Matrix& a, const Vector& b);

// Basis of span_K(S) ∩ O^n for a spanning set S of vectors in K^n.
std::vector<Vector> saturate(const std::vector<Vector>& spanning, std::size_t n, unsigned long p);

// O-basis of the O-span of the given vectors.
std::vector<Vector> lattice_basis(const std::vector<Vector>& generators, std::size_t n,
                                  unsigned long p);
// Coordinates of v in a basis of linearly independent vectors; throws if v is
// outside their K-span.
Vector coordinates(const std::vector<Vector>& basis, const Vector& v);

// A finitely generated Z_(p)-module O^g / (relation columns).
class FiniteModulePresentation {
 public:
  FiniteModulePresentation(std::size_t generators, Matrix relations, unsigned long p);

  static FiniteModulePresentation zero_module(unsigned long p);
  static FiniteModulePresentation cyclic(int exponent, unsigned long p);
  static FiniteModulePresentation direct_sum(const FiniteModulePresentation& a,
                                             const FiniteModulePresentation& b);

  std::size_t generators() const { return generators_; }
  const Matrix& relations() const { return relations_; }
  unsigned long prime() const { return p_; }
  // Valuations of the nonzero elementary divisors, nondecreasing.
  const std::vector<int>& elementary_divisors() const { return divisors_; }
  std::size_t free_rank() const { return generators_ - units_ - divisors_.size(); }
  bool is_finite() const { return free_rank() == 0; }
  // Length of the module (v_p of its order); requires finiteness.
  int length() const;

 private:
  std::size_t generators_;
  Matrix relations_;
  unsigned long p_;
  std::vector<int> divisors_;
  std::size_t units_ = 0;
};

// p^(sum of elementary divisors); throws NotFinite when free rank > 0.
PIdeal fitting_ideal(const FiniteModulePresentation& m);

// Presentation of L_out / L_in for lattices given by generators, L_in ⊆ L_out.
// Throws InvalidArgument if L_in is not contained in L_out.
FiniteModulePresentation quotient_presentation(const std::vector<Vector>& outer,
                                               const std::vector<Vector>& inner, std::size_t n,
                                               unsigned long p);

}  // namespace congrua
