#include "congrua/dvr.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace congrua {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::NoIdempotent: return "NoIdempotent";
    case ErrorKind::RankNotOne: return "RankNotOne";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NoCICover: return "NoCICover";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::EisensteinIdeal: return "EisensteinIdeal";
    case ErrorKind::BlockNotFound: return "BlockNotFound";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::PairingDegenerate: return "PairingDegenerate";
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::SlowConvergence: return "SlowConvergence";
    case ErrorKind::UnsupportedLocalType: return "UnsupportedLocalType";
  }
  return "Unknown";
}

int valuation(const Integer& x, unsigned long p) {
  if (x == 0) return kInfiniteValuation;
  Integer q = x;
  int v = 0;
  while (mpz_divisible_ui_p(q.get_mpz_t(), p)) {
    mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), p);
    ++v;
  }
  return v;
}

int valuation(const Rational& x, unsigned long p) {
  if (x == 0) return kInfiniteValuation;
  return valuation(Integer(x.get_num()), p) - valuation(Integer(x.get_den()), p);
}

bool is_p_integral(const Rational& x, unsigned long p) {
  return !mpz_divisible_ui_p(x.get_den_mpz_t(), p);
}

bool is_p_unit(const Rational& x, unsigned long p) {
  return x != 0 && is_p_integral(x, p) && !mpz_divisible_ui_p(x.get_num_mpz_t(), p);
}

Rational p_power(unsigned long p, int exponent) {
  Integer base;
  mpz_ui_pow_ui(base.get_mpz_t(), p, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) return Rational(base);
  return Rational(Integer(1), base);
}

// ---------------------------------------------------------------- PIdeal

PIdeal PIdeal::power(int e) {
  if (e < 0) throw Error(ErrorKind::InvalidArgument, "negative ideal exponent");
  return PIdeal(e);
}

PIdeal PIdeal::generated_by(const Rational& x, unsigned long p) {
  if (x == 0) return zero();
  if (!is_p_integral(x, p)) throw Error(ErrorKind::InvalidArgument, "generator is not p-integral");
  return PIdeal(congrua::valuation(x, p));
}

int PIdeal::valuation() const {
  if (!valuation_) throw Error(ErrorKind::Degenerate, "valuation of the zero ideal");
  return *valuation_;
}

PIdeal PIdeal::operator*(const PIdeal& other) const {
  if (is_zero() || other.is_zero()) return zero();
  return PIdeal(*valuation_ + *other.valuation_);
}

bool PIdeal::contains(const PIdeal& other) const {
  if (other.is_zero()) return true;
  if (is_zero()) return false;
  return *valuation_ <= *other.valuation_;
}

std::string PIdeal::to_string() const {
  if (is_zero()) return "(0)";
  if (*valuation_ == 0) return "(1)";
  return "p^" + std::to_string(*valuation_);
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::InvalidArgument, "ragged matrix literal");
    for (long x : r) data_.emplace_back(x);
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw Error(ErrorKind::InvalidArgument, "column size mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorKind::InvalidArgument, "row size mismatch");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<long>(i * cols_),
                data_.begin() + static_cast<long>((i + 1) * cols_));
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

std::vector<Vector> Matrix::columns() const {
  std::vector<Vector> out;
  out.reserve(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols_ != other.rows_) throw Error(ErrorKind::InvalidArgument, "matrix product shape");
  Matrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        const Rational& b = other(k, j);
        if (b != 0) out(i, j) += a * b;
      }
    }
  return out;
}

Vector Matrix::operator*(const Vector& v) const {
  if (cols_ != v.size()) throw Error(ErrorKind::InvalidArgument, "matrix-vector shape");
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (v[j] != 0 && (*this)(i, j) != 0) out[i] += (*this)(i, j) * v[j];
  return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorKind::InvalidArgument, "sum shape");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorKind::InvalidArgument, "difference shape");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
  return out;
}

Matrix Matrix::scaled(const Rational& s) const {
  Matrix out = *this;
  for (auto& x : out.data_) x *= s;
  return out;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
}

bool Matrix::is_p_integral(unsigned long p) const {
  return std::all_of(data_.begin(), data_.end(),
                     [p](const Rational& x) { return congrua::is_p_integral(x, p); });
}

void Matrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void Matrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

Vector add(const Vector& a, const Vector& b) {
  Vector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vector sub(const Vector& a, const Vector& b) {
  Vector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Vector scale(const Vector& a, const Rational& s) {
  Vector out = a;
  for (auto& x : out) x *= s;
  return out;
}

Rational dot(const Vector& a, const Vector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

int min_valuation(const Vector& v, unsigned long p) {
  int best = kInfiniteValuation;
  for (const auto& x : v) best = std::min(best, valuation(x, p));
  return best;
}

// ---------------------------------------------------------------- SNF

namespace {

struct SnfWork {
  Matrix a, u, v, u_inv, v_inv;
  std::vector<int> vals;
  std::size_t rank = 0;
};

SnfWork snf_full(const Matrix& input, unsigned long p, bool want_inverses) {
  const std::size_t m = input.rows(), n = input.cols();
  SnfWork w{input, Matrix::identity(m), Matrix::identity(n), Matrix(), Matrix(), {}, 0};
  if (want_inverses) {
    w.u_inv = Matrix::identity(m);
    w.v_inv = Matrix::identity(n);
  }
  Matrix& a = w.a;
  const std::size_t steps = std::min(m, n);
  for (std::size_t k = 0; k < steps; ++k) {
    int best = kInfiniteValuation;
    std::size_t bi = k, bj = k;
    for (std::size_t i = k; i < m; ++i)
      for (std::size_t j = k; j < n; ++j) {
        if (a(i, j) == 0) continue;
        int v = valuation(a(i, j), p);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best == kInfiniteValuation) break;
    a.swap_rows(k, bi);
    w.u.swap_rows(k, bi);
    if (want_inverses) w.u_inv.swap_cols(k, bi);
    a.swap_cols(k, bj);
    w.v.swap_cols(k, bj);
    if (want_inverses) w.v_inv.swap_rows(k, bj);

    const Rational pivot = a(k, k);
    for (std::size_t i = k + 1; i < m; ++i) {
      if (a(i, k) == 0) continue;
      const Rational f = a(i, k) / pivot;
      for (std::size_t j = k; j < n; ++j)
        if (a(k, j) != 0) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < m; ++j)
        if (w.u(k, j) != 0) w.u(i, j) -= f * w.u(k, j);
      if (want_inverses)
        for (std::size_t r = 0; r < m; ++r)
          if (w.u_inv(r, i) != 0) w.u_inv(r, k) += f * w.u_inv(r, i);
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (a(k, j) == 0) continue;
      const Rational f = a(k, j) / pivot;
      for (std::size_t i = k; i < m; ++i)
        if (a(i, k) != 0) a(i, j) -= f * a(i, k);
      for (std::size_t i = 0; i < n; ++i)
        if (w.v(i, k) != 0) w.v(i, j) -= f * w.v(i, k);
      if (want_inverses)
        for (std::size_t c = 0; c < n; ++c)
          if (w.v_inv(j, c) != 0) w.v_inv(k, c) += f * w.v_inv(j, c);
    }
    // Normalize the pivot to exactly p^best.
    const Rational unit = pivot / p_power(p, best);
    a(k, k) = p_power(p, best);
    for (std::size_t j = 0; j < m; ++j) w.u(k, j) /= unit;
    if (want_inverses)
      for (std::size_t r = 0; r < m; ++r) w.u_inv(r, k) *= unit;
    w.vals.push_back(best);
    ++w.rank;
  }
  while (w.vals.size() < steps) w.vals.push_back(kInfiniteValuation);
  return w;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Matrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t sel = r;
    while (sel < a.rows() && a(sel, c) == 0) ++sel;
    if (sel == a.rows()) continue;
    a.swap_rows(r, sel);
    const Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j)
      if (a(r, j) != 0) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j)
        if (a(r, j) != 0) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

SmithForm snf(const Matrix& a, unsigned long p) {
  SnfWork w = snf_full(a, p, false);
  return SmithForm{std::move(w.u), std::move(w.a), std::move(w.v), std::move(w.vals), w.rank};
}

std::size_t rank(const Matrix& a) {
  Matrix copy = a;
  return rref(copy).size();
}

std::vector<Vector> kernel(const Matrix& a) {
  Matrix r = a;
  const auto pivots = rref(r);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(a.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve_linear(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::InvalidArgument, "solve_linear shape");
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  Vector x(a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, a.cols());
  return x;
}

std::vector<Vector> saturate(const std::vector<Vector>& spanning, std::size_t n, unsigned long p) {
  if (spanning.empty()) return {};
  Matrix a = Matrix::from_rows(spanning, n);
  SnfWork w = snf_full(a, p, true);
  std::vector<Vector> basis;
  for (std::size_t i = 0; i < w.rank; ++i) basis.push_back(w.v_inv.row(i));
  return basis;
}

std::vector<Vector> lattice_basis(const std::vector<Vector>& generators, std::size_t n,
                                  unsigned long p) {
  // Column echelon form by unimodular column operations.
  std::vector<Vector> cols;
  for (const auto& g : generators)
    if (!is_zero(g)) cols.push_back(g);
  std::vector<Vector> basis;
  for (std::size_t row = 0; row < n && !cols.empty(); ++row) {
    int best = kInfiniteValuation;
    std::size_t sel = 0;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j][row] == 0) continue;
      int v = valuation(cols[j][row], p);
      if (v < best) {
        best = v;
        sel = j;
      }
    }
    if (best == kInfiniteValuation) continue;
    Vector pivot = cols[sel];
    cols.erase(cols.begin() + static_cast<long>(sel));
    std::vector<Vector> rest;
    for (auto& c : cols) {
      if (c[row] != 0) {
        const Rational f = c[row] / pivot[row];
        for (std::size_t i = 0; i < n; ++i)
          if (pivot[i] != 0) c[i] -= f * pivot[i];
      }
      if (!is_zero(c)) rest.push_back(std::move(c));
    }
    cols = std::move(rest);
    basis.push_back(std::move(pivot));
  }
  return basis;
}

Vector coordinates(const std::vector<Vector>& basis, const Vector& v) {
  if (basis.empty()) {
    if (!is_zero(v)) throw Error(ErrorKind::InvalidArgument, "vector outside the span");
    return {};
  }
  auto x = solve_linear(Matrix::from_columns(basis, v.size()), v);
  if (!x) throw Error(ErrorKind::InvalidArgument, "vector outside the span");
  return *x;
}

// ---------------------------------------------------------------- modules

FiniteModulePresentation::FiniteModulePresentation(std::size_t generators, Matrix relations,
                                                   unsigned long p)
    : generators_(generators), relations_(std::move(relations)), p_(p) {
  if (relations_.cols() > 0 && relations_.rows() != generators_)
    throw Error(ErrorKind::InvalidArgument, "relation matrix must have one row per generator");
  if (relations_.cols() == 0) relations_ = Matrix(generators_, 0);
  if (!relations_.is_p_integral(p_))
    throw Error(ErrorKind::InvalidArgument, "relations must be p-integral");
  const SmithForm s = snf(relations_, p_);
  for (int v : s.diagonal_valuations) {
    if (v == 0) ++units_;
    else if (v != kInfiniteValuation) divisors_.push_back(v);
  }
}

FiniteModulePresentation FiniteModulePresentation::zero_module(unsigned long p) {
  return FiniteModulePresentation(0, Matrix(0, 0), p);
}

FiniteModulePresentation FiniteModulePresentation::cyclic(int exponent, unsigned long p) {
  Matrix r(1, 1);
  r(0, 0) = p_power(p, exponent);
  return FiniteModulePresentation(1, r, p);
}

FiniteModulePresentation FiniteModulePresentation::direct_sum(const FiniteModulePresentation& a,
                                                              const FiniteModulePresentation& b) {
  if (a.p_ != b.p_) throw Error(ErrorKind::InvalidArgument, "direct sum over different primes");
  const std::size_t g = a.generators_ + b.generators_;
  Matrix r(g, a.relations_.cols() + b.relations_.cols());
  for (std::size_t i = 0; i < a.relations_.rows(); ++i)
    for (std::size_t j = 0; j < a.relations_.cols(); ++j) r(i, j) = a.relations_(i, j);
  for (std::size_t i = 0; i < b.relations_.rows(); ++i)
    for (std::size_t j = 0; j < b.relations_.cols(); ++j)
      r(a.generators_ + i, a.relations_.cols() + j) = b.relations_(i, j);
  return FiniteModulePresentation(g, r, a.p_);
}

int FiniteModulePresentation::length() const {
  if (!is_finite()) throw Error(ErrorKind::NotFinite, "module has positive free rank");
  int total = 0;
  for (int v : divisors_) total += v;
  return total;
}

PIdeal fitting_ideal(const FiniteModulePresentation& m) {
  return PIdeal::power(m.length());
}

FiniteModulePresentation quotient_presentation(const std::vector<Vector>& outer,
                                               const std::vector<Vector>& inner, std::size_t n,
                                               unsigned long p) {
  const auto basis = lattice_basis(outer, n, p);
  std::vector<Vector> rel_cols;
  for (const auto& v : inner) {
    if (is_zero(v)) continue;
    Vector c = coordinates(basis, v);
    for (const auto& x : c)
      if (!is_p_integral(x, p))
        throw Error(ErrorKind::InvalidArgument, "inner lattice not contained in outer lattice");
    rel_cols.push_back(std::move(c));
  }
  Matrix rel = rel_cols.empty() ? Matrix(basis.size(), 0) : Matrix::from_columns(rel_cols, basis.size());
  return FiniteModulePresentation(basis.size(), rel, p);
}

}  // namespace congrua
