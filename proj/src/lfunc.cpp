#include "congrua/lfunc.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "congrua/kernels.hpp"

namespace congrua {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool squarefree(long m) {
  if (m < 0) m = -m;
  for (long q = 2; q * q <= m; ++q)
    if (m % (q * q) == 0) return false;
  return true;
}

}  // namespace

bool is_fundamental_discriminant(long d) {
  if (d == 1) return true;
  if (d == 0) return false;
  const long r = ((d % 4) + 4) % 4;
  if (r == 1) return squarefree(d);
  if (r != 0) return false;
  const long m = d / 4;
  const long rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && squarefree(m);
}

QuadraticCharacter::QuadraticCharacter(long discriminant) : d_(discriminant) {
  if (!is_fundamental_discriminant(d_))
    throw Error(ErrorKind::NotPrimitive, std::to_string(d_) + " is not a fundamental discriminant");
}

int QuadraticCharacter::operator()(long n) const {
  if (d_ == 1) return 1;
  Integer m = n;
  if (n < 0) {
    // (d/−1) = sign of d
    return (d_ < 0 ? -1 : 1) * (*this)(-n);
  }
  return mpz_si_kronecker(d_, m.get_mpz_t());
}

double gamma_r(double s) { return std::pow(kPi, -s / 2) * std::tgamma(s / 2); }
double gamma_c(double s) { return 2 * std::pow(2 * kPi, -s) * std::tgamma(s); }

double gamma_factor(int k, int nu, double s) {
  auto pole = [](double x) { return x <= 0 && x == std::floor(x); };
  if (pole((s + nu) / 2) || pole(s + k - 1))
    throw Error(ErrorKind::PoleHit, "gamma factor has a pole at s = " + std::to_string(s));
  return gamma_c(s + k - 1) * gamma_r(s + nu);
}

std::complex<double> gauss_sum(const QuadraticCharacter& alpha) {
  const long d = alpha.conductor();
  std::complex<double> g = 0;
  for (long a = 0; a < d; ++a) {
    const int x = alpha(a);
    if (x != 0) g += static_cast<double>(x) * std::polar(1.0, 2 * kPi * static_cast<double>(a) / static_cast<double>(d));
  }
  return g;
}

std::optional<std::pair<long, long>> detect_rational(double x, long max_denominator, double error) {
  if (!std::isfinite(x)) return std::nullopt;
  // Convergents h/k of x.
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int step = 0; step < 64; ++step) {
    const double fl = std::floor(r);
    if (std::abs(fl) > 9e15) break;
    const long a = static_cast<long>(fl);
    const long h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > max_denominator || k2 <= 0) break;
    if (std::abs(x - static_cast<double>(h2) / static_cast<double>(k2)) <= error) return std::make_pair(h2, k2);
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = r - fl;
    if (frac == 0) break;
    r = 1 / frac;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- series

AdjointDirichletSeries::AdjointDirichletSeries(long level, int weight, const std::vector<Integer>& a,
                                               QuadraticCharacter alpha)
    : level_(level), weight_(weight), a_(a), alpha_(alpha) {
  if (a_.size() < 2) throw Error(ErrorKind::InvalidArgument, "empty q-expansion");
  if (std::gcd(level_, alpha_.conductor()) != 1)
    throw Error(ErrorKind::PreconditionFailed, "twist conductor must be prime to the level");
  for (long q = 2; q <= level_; ++q)
    if (level_ % (q * q) == 0) throw Error(ErrorKind::UnsupportedLocalType, "non-squarefree level");
}

LocalType AdjointDirichletSeries::local_type(long ell) const {
  if (level_ % ell != 0) return LocalType::Unramified;
  if (level_ % (ell * ell) == 0) throw Error(ErrorKind::UnsupportedLocalType, "ℓ² divides the level");
  if (static_cast<std::size_t>(ell) >= a_.size()) throw Error(ErrorKind::InvalidArgument, "a_ℓ not available");
  Integer target;
  mpz_ui_pow_ui(target.get_mpz_t(), static_cast<unsigned long>(ell), static_cast<unsigned long>(weight_ - 2));
  if (a_[ell] * a_[ell] == target) return LocalType::Special;
  if (a_[ell] != 0) return LocalType::PrincipalSeries;
  throw Error(ErrorKind::UnsupportedLocalType, "a_ℓ = 0 at ℓ ‖ N");
}

double AdjointDirichletSeries::conductor() const {
  const double d = static_cast<double>(alpha_.conductor());
  return static_cast<double>(level_) * static_cast<double>(level_) * d * d * d;
}

std::vector<double> AdjointDirichletSeries::coefficients(std::size_t n) const {
  if (n > available()) throw Error(ErrorKind::InvalidArgument, "not enough Fourier coefficients");
  std::vector<double> b(n + 1, 0);
  if (n == 0) return b;
  std::vector<std::size_t> spf(n + 1, 0);
  for (std::size_t i = 2; i <= n; ++i)
    if (spf[i] == 0)
      for (std::size_t j = i; j <= n; j += i)
        if (spf[j] == 0) spf[j] = i;
  b[1] = 1;
  // Local coefficients b_{ℓ^j} for each prime ℓ.
  std::vector<std::vector<double>> local(n + 1);
  for (std::size_t ell = 2; ell <= n; ++ell) {
    if (spf[ell] != ell) continue;
    const double chi = alpha_(static_cast<long>(ell));
    auto& loc = local[ell];
    loc.assign(1, 1.0);
    switch (local_type(static_cast<long>(ell))) {
      case LocalType::Special:
        // (1 − α(ℓ)ℓ^(−1−s))^(−1)
        for (std::size_t pe = ell; pe <= n; pe *= ell) loc.push_back(loc.back() * chi / static_cast<double>(ell));
        break;
      case LocalType::PrincipalSeries:
        for (std::size_t pe = ell; pe <= n; pe *= ell) loc.push_back(loc.back() * chi);
        break;
      case LocalType::Unramified: {
        // 1/(1 − e X + e X² − X³), e = a²/ℓ^(k−1) − 1, X = α(ℓ)ℓ^(−s)
        const double lk = std::pow(static_cast<double>(ell), weight_ - 1);
        const double al = a_[ell].get_d();
        const double e = al / lk * al - 1;
        std::vector<double> h{1};
        double chij = 1;
        for (std::size_t pe = ell, j = 1; pe <= n; pe *= ell, ++j) {
          double v = e * h[j - 1];
          if (j >= 2) v -= e * h[j - 2];
          if (j >= 3) v += h[j - 3];
          h.push_back(v);
          chij *= chi;
          loc.push_back(v * chij);
        }
        break;
      }
    }
  }
  for (std::size_t m = 2; m <= n; ++m) {
    const std::size_t ell = spf[m];
    std::size_t rest = m, e = 0;
    while (rest % ell == 0) {
      rest /= ell;
      ++e;
    }
    b[m] = b[rest] * local[ell][e];
  }
  return b;
}

// ---------------------------------------------------------------- evaluation

namespace {

using cplx = std::complex<double>;

cplx lngamma(cplx z) {
  gsl_sf_result lnr, arg;
  const int status = gsl_sf_lngamma_complex_e(z.real(), z.imag(), &lnr, &arg);
  if (status != GSL_SUCCESS) throw Error(ErrorKind::PoleHit, "log-gamma failed");
  return {lnr.val, arg.val};
}

// log Γ_C(w + k − 1)Γ_R(w + ν)
cplx log_gamma_factor(int k, int nu, cplx w) {
  const cplx a = w + static_cast<double>(k - 1);
  const cplx b = w + static_cast<double>(nu);
  return std::log(2.0) - a * std::log(2 * kPi) + lngamma(a) - b / 2.0 * std::log(kPi) + lngamma(b / 2.0);
}

// Quadrature grid in t for w = c + it, shared by every kernel so the
// n-dependent phases are computed once.
struct Grid {
  static constexpr double c = 1.5;
  static constexpr double step = 0.2;
  static constexpr double half_width = 40;
  std::vector<double> t;
  Grid() {
    for (double x = -half_width; x <= half_width + 1e-9; x += step) t.push_back(x);
  }
};

// I(σ, n) = (1/2πi)∫_(c) γ(σ + w) q^((σ+w)/2) n^(−σ−w) e^(βw²) dw/w
//         = n^(−σ−c) Re Σ_j g_j e^(−i t_j log n)
struct Kernel {
  double sigma;
  std::vector<double> re, im;

  Kernel(const Grid& grid, int k, int nu, double log_q, double sigma_, double beta) : sigma(sigma_) {
    for (double t : grid.t) {
      const cplx w(Grid::c, t);
      const cplx lg = log_gamma_factor(k, nu, sigma + w) + (sigma + w) / 2.0 * log_q + beta * w * w;
      const cplx g = std::exp(lg) / w * (Grid::step / (2 * kPi));
      re.push_back(g.real());
      im.push_back(g.imag());
    }
  }

  double at(double log_n, const std::vector<double>& er, const std::vector<double>& ei) const {
    const auto v = kernels::cdot(re.data(), im.data(), er.data(), ei.data(), re.size());
    return std::exp(-(sigma + Grid::c) * log_n) * v.re;
  }
};

struct Phases {
  std::vector<double> re, im;
  void set(const Grid& grid, double log_n) {
    re.resize(grid.t.size());
    im.resize(grid.t.size());
    for (std::size_t j = 0; j < grid.t.size(); ++j) {
      re[j] = std::cos(grid.t[j] * log_n);
      im[j] = -std::sin(grid.t[j] * log_n);
    }
  }
};

std::map<unsigned long, int> valuations_of(const std::optional<std::pair<long, long>>& r,
                                           const std::vector<unsigned long>& primes) {
  std::map<unsigned long, int> out;
  if (!r) return out;
  for (unsigned long p : primes) {
    if (r->first == 0) {
      out[p] = std::numeric_limits<int>::max();
      continue;
    }
    int v = 0;
    for (long x = r->first; x % static_cast<long>(p) == 0; x /= static_cast<long>(p)) ++v;
    for (long x = r->second; x % static_cast<long>(p) == 0; x /= static_cast<long>(p)) --v;
    out[p] = v;
  }
  return out;
}

}  // namespace

LValueResult adjoint_l_value(const ModularSymbolSpace& s, const EigenformData& f, const QuadraticCharacter& alpha,
                             const LValueOptions& options) {
  if (!f.newform()) throw Error(ErrorKind::InvalidArgument, "adjoint L-values need a newform");
  const int k = s.weight();
  const int nu = alpha.even() ? 1 : 0;
  // Validate local types before any heavy work.
  if (std::gcd(s.level(), alpha.conductor()) != 1)
    throw Error(ErrorKind::PreconditionFailed, "twist conductor must be prime to the level");
  AdjointDirichletSeries probe(s.level(), k, q_expansion(s, f, static_cast<std::size_t>(s.level()) + 1), alpha);
  for (long ell = 2; ell <= s.level(); ++ell)
    if (is_prime(ell)) probe.local_type(ell);
  const double q = probe.conductor();
  const double log_q = std::log(q);

  const Grid grid;
  const double betas[2] = {0.0, 0.01};
  std::vector<Kernel> kernels_;
  for (double beta : betas) {
    kernels_.emplace_back(grid, k, nu, log_q, 1.0, beta);
    kernels_.emplace_back(grid, k, nu, log_q, 0.0, beta);
  }
  Phases ph;
  ph.set(grid, 0);
  const double scale = std::abs(kernels_[0].at(0, ph.re, ph.im)) + std::abs(kernels_[1].at(0, ph.re, ph.im));

  // Truncation: the kernels decay faster than any power once n ≫ √q.
  auto tail = [&](double n) {
    ph.set(grid, std::log(n));
    double m = 0;
    for (const auto& kr : kernels_) m = std::max(m, std::abs(kr.at(std::log(n), ph.re, ph.im)));
    return m * n;
  };
  double n_cut = std::max(10.0, std::sqrt(q));
  while (tail(n_cut) > options.target_error * 1e-3 * scale) {
    n_cut *= 1.25;
    if (n_cut > static_cast<double>(options.budget))
      throw Error(ErrorKind::SlowConvergence, "needs more than " + std::to_string(options.budget) + " coefficients");
  }
  const auto terms = static_cast<std::size_t>(std::ceil(n_cut));

  const std::size_t need = std::max(terms, static_cast<std::size_t>(s.level()) + 1);
  std::vector<Integer> local;
  std::vector<Integer>& a = options.coefficients ? *options.coefficients : local;
  if (a.size() <= need) a = q_expansion(s, f, need);
  const AdjointDirichletSeries series(s.level(), k, a, alpha);
  const auto b = series.coefficients(terms);
  double sums[4] = {0, 0, 0, 0};
  double magnitude = 0;  // Σ|b_n I(n)|, for the rounding estimate
  for (std::size_t n = 1; n <= terms; ++n) {
    if (b[n] == 0) continue;
    const double ln = std::log(static_cast<double>(n));
    ph.set(grid, ln);
    for (int i = 0; i < 4; ++i) {
      const double x = b[n] * kernels_[i].at(ln, ph.re, ph.im);
      sums[i] += x;
      if (i < 2) magnitude += std::abs(x);
    }
  }

  // Λ = A_β + ε B_β for both β.
  LValueResult out;
  const double a1 = sums[0], b1 = sums[1], a2 = sums[2], b2 = sums[3];
  out.sign = std::abs(b1 - b2) > 1e-300 ? (a2 - a1) / (b1 - b2) : 1.0;
  const double eps = out.sign >= 0 ? 1.0 : -1.0;
  out.sign_residual = std::abs(out.sign - eps);
  const double lambda1 = a1 + eps * b1, lambda2 = a2 + eps * b2;
  out.completed = lambda1;
  // Quadrature and phase errors scale with the grid size, rounding with the
  // absolute sum.
  const double rounding = 1e-15 * static_cast<double>(grid.t.size()) * magnitude / std::abs(lambda1);
  out.error = std::abs(lambda1 - lambda2) / std::abs(lambda1) + rounding + options.target_error * 1e-3;
  out.terms = terms;
  out.conductor = q;
  if (out.error > options.target_error || out.sign_residual > 1e-6)
    throw Error(ErrorKind::SlowConvergence, "functional equation residual " + std::to_string(out.error) +
                                                 ", sign " + std::to_string(out.sign));
  const double gamma1 = gamma_factor(k, nu, 1.0);
  out.value = out.completed / (std::sqrt(q) * gamma1);

  out.periods = manin_periods(s, f, 1e-12, a);
  const double omega = std::abs(out.periods.plus) * std::abs(out.periods.minus);
  const double g2 = (alpha.even() ? 1.0 : -1.0) * static_cast<double>(alpha.conductor());
  out.normalized = g2 * gamma1 * out.value / omega;
  out.classical = out.value / (std::pow(kPi, k + 1) * omega);
  const double rel = std::max(out.error, out.periods.error) + 1e-14;
  auto detect = [&](double x) -> std::optional<std::pair<long, long>> {
    const double tol = std::min(std::max(10 * rel * std::abs(x), 1e-13), options.detection_error);
    return detect_rational(x, options.max_denominator, tol);
  };
  out.rational = detect(out.normalized);
  out.classical_rational = detect(out.classical);
  out.valuations = valuations_of(out.rational, options.primes);
  out.classical_valuations = valuations_of(out.classical_rational, options.primes);
  return out;
}

std::string to_string(PredictionFlag f) {
  switch (f) {
    case PredictionFlag::Predicted: return "PREDICTED";
    case PredictionFlag::NotPredicted: return "NotPredicted";
    case PredictionFlag::ConditionViolated: return "ConditionViolated";
    case PredictionFlag::Undetected: return "Undetected";
    case PredictionFlag::Unavailable: return "Unavailable";
    case PredictionFlag::Failed: return "Failed";
  }
  return "?";
}

namespace {

// #(O_F/N)^× for F = Q(√D) and squarefree N prime to D.
long phi_f(long n, const QuadraticCharacter& alpha) {
  long phi = 1;
  for (long ell = 2; ell <= n; ++ell) {
    if (n % ell != 0 || !is_prime(ell)) continue;
    const int chi = alpha(ell);
    phi *= chi == 1 ? (ell - 1) * (ell - 1) : chi == -1 ? ell * ell - 1 : ell * (ell - 1);
  }
  return phi;
}

}  // namespace

CongruencePrimeReport congruence_prime_report(const ModularSymbolSpace& s, const EigenformData& f,
                                              const std::vector<long>& discriminants,
                                              const std::vector<unsigned long>& primes,
                                              const LValueOptions& options) {
  CongruencePrimeReport report;
  report.form = f.label;
  std::vector<Integer> store;
  LValueOptions o = options;
  o.primes = primes;
  if (!o.coefficients) o.coefficients = &store;
  for (long d : discriminants) {
    std::optional<QuadraticCharacter> alpha;
    std::string failure;
    bool coprime = false;
    try {
      alpha.emplace(d);
      coprime = std::gcd(s.level(), alpha->conductor()) == 1;
      if (coprime) report.values.emplace(d, adjoint_l_value(s, f, *alpha, o));
    } catch (const Error& e) {
      failure = e.what();
    }
    for (unsigned long p : primes) {
      PredictionEntry entry{d, p, PredictionFlag::Failed, 0, failure};
      if (!alpha) {
        report.entries.push_back(entry);
        continue;
      }
      const long pl = static_cast<long>(p);
      const long bad = 6 * s.level() * alpha->conductor() * phi_f(s.level(), *alpha);
      if (!coprime) {
        entry.flag = PredictionFlag::ConditionViolated;
        entry.note = "D must be prime to N";
      } else if (!is_prime(pl) || bad % pl == 0 || pl <= s.weight() - 2) {
        entry.flag = PredictionFlag::ConditionViolated;
        entry.note = "p must be a prime > k − 2 not dividing 6NDφ_F(N)";
      } else if (!failure.empty()) {
        entry.flag = PredictionFlag::Failed;
      } else if (d < 0) {
        entry.flag = PredictionFlag::Unavailable;
        entry.note = "imaginary quadratic: the value is non-critical and its period is not computed";
      } else {
        const auto& r = report.values.at(d);
        if (!r.rational) {
          entry.flag = PredictionFlag::Undetected;
        } else {
          entry.valuation = r.valuations.at(p);
          entry.flag = entry.valuation >= 1 ? PredictionFlag::Predicted : PredictionFlag::NotPredicted;
          if (entry.flag == PredictionFlag::Predicted)
            entry.note = "congruence with a non base change Hilbert eigenform";
        }
      }
      report.entries.push_back(entry);
    }
  }
  return report;
}

}  // namespace congrua
