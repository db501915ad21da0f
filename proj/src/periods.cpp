#include <cmath>
#include <complex>
#include <numeric>

#include "congrua/kernels.hpp"
#include "congrua/modsym.hpp"

namespace congrua {

namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<Integer> apply_matrix(const std::vector<Integer>& poly, const Mat2& g, int deg) {
  std::vector<Integer> out(static_cast<std::size_t>(deg + 1));
  for (int e = 0; e <= deg; ++e) {
    if (poly[e] == 0) continue;
    const auto t = transform_monomial(e, deg, g);
    for (int j = 0; j <= deg; ++j) out[j] += poly[e] * t[j];
  }
  return out;
}

// A point x + i/den with x = num/den.
struct Point {
  long num;
  long den;
};

// T_m(z) = Σ a_n e^(2πinz)/(2πin)^(m+1) for m = 0..deg, through the SIMD dot.
struct SeriesTable {
  std::vector<std::vector<double>> re, im;  // [m][n−1]

  SeriesTable(const std::vector<double>& a, int deg) : re(deg + 1), im(deg + 1) {
    const std::size_t terms = a.size() - 1;
    for (int m = 0; m <= deg; ++m) {
      re[m].resize(terms);
      im[m].resize(terms);
      for (std::size_t n = 1; n <= terms; ++n) {
        const cplx w = a[n] / std::pow(cplx(0, kTwoPi * static_cast<double>(n)), m + 1);
        re[m][n - 1] = w.real();
        im[m][n - 1] = w.imag();
      }
    }
  }

  std::vector<cplx> at(const Point& z) const {
    const std::size_t terms = re[0].size();
    std::vector<double> er(terms), ei(terms);
    for (std::size_t n = 1; n <= terms; ++n) {
      const long phase = static_cast<long>((static_cast<__int128>(n) * z.num) % z.den);
      const double mag = std::exp(-kTwoPi * static_cast<double>(n) / static_cast<double>(z.den));
      const double ang = kTwoPi * static_cast<double>(phase) / static_cast<double>(z.den);
      er[n - 1] = mag * std::cos(ang);
      ei[n - 1] = mag * std::sin(ang);
    }
    std::vector<cplx> out;
    for (std::size_t m = 0; m < re.size(); ++m) {
      const auto c = kernels::cdot(re[m].data(), im[m].data(), er.data(), ei.data(), terms);
      out.emplace_back(c.re, c.im);
    }
    return out;
  }
};

// ∫_z^{i∞} f(w) Q(w, 1) dw
cplx integral_to_infinity(const std::vector<Integer>& q, const Point& z, const std::vector<cplx>& t) {
  const int deg = static_cast<int>(q.size()) - 1;
  const cplx zz(static_cast<double>(z.num) / static_cast<double>(z.den), 1.0 / static_cast<double>(z.den));
  cplx total = 0;
  for (int j = 0; j <= deg; ++j) {
    if (q[j] == 0) continue;
    // ∫_z^{i∞} w^j e^{αw} dw = −e^{αz} Σ_m (−1)^m j!/(j−m)! z^(j−m) / α^(m+1)
    cplx s = 0;
    double falling = 1;
    for (int m = 0; m <= j; ++m) {
      s += (m % 2 == 0 ? 1.0 : -1.0) * falling * std::pow(zz, j - m) * t[m];
      falling *= j - m;
    }
    total -= q[j].get_d() * s;
  }
  return total;
}

struct Cycle {
  Mat2 gamma;
  int monomial;
};

struct Fit {
  cplx plus, minus;
  double residual;
};

Fit fit_periods(const ModularSymbolSpace& s, const EigenformData& f, const std::vector<Integer>& a,
                std::size_t terms, const std::vector<Cycle>& cycles) {
  const int deg = s.weight() - 2;
  std::vector<double> ad(terms + 1);
  for (std::size_t n = 1; n <= terms; ++n) ad[n] = a[n].get_d();
  const SeriesTable table(ad, deg);
  std::vector<cplx> values;
  std::vector<std::pair<double, double>> rows;
  std::map<std::pair<long, long>, std::vector<cplx>> cache;
  auto series_at = [&](const Point& z) -> const std::vector<cplx>& {
    auto key = std::make_pair(z.num, z.den);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, table.at(z)).first;
    return it->second;
  };
  for (const auto& cyc : cycles) {
    const Mat2& g = cyc.gamma;
    std::vector<Integer> p(static_cast<std::size_t>(deg + 1));
    p[cyc.monomial] = 1;
    const Vector x = path_from_infinity(s, p, g.a, g.c);
    const double fp = dot(f.phi_plus, x).get_d(), fm = dot(f.phi_minus, x).get_d();
    const long den = g.c;
    const Point z0{-g.d, den}, gz0{g.a, den};
    const cplx v = integral_to_infinity(apply_matrix(p, g, deg), z0, series_at(z0)) -
                   integral_to_infinity(p, gz0, series_at(gz0));
    values.push_back(v);
    rows.emplace_back(fp, fm);
  }
  // Normal equations for the two complex unknowns.
  double s11 = 0, s12 = 0, s22 = 0;
  cplx r1 = 0, r2 = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto [u, w] = rows[i];
    s11 += u * u;
    s12 += u * w;
    s22 += w * w;
    r1 += u * values[i];
    r2 += w * values[i];
  }
  const double det = s11 * s22 - s12 * s12;
  if (std::abs(det) < 1e-12 * (s11 * s22 + 1))
    throw Error(ErrorKind::PrecisionLoss, "cycles do not separate the ± periods");
  const cplx plus = (s22 * r1 - s12 * r2) / det;
  const cplx minus = (s11 * r2 - s12 * r1) / det;
  double num = 0, scale = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    num += std::norm(values[i] - rows[i].first * plus - rows[i].second * minus);
    scale += std::norm(values[i]);
  }
  return {plus, minus, std::sqrt(num / scale)};
}

}  // namespace

Vector path_from_infinity(const ModularSymbolSpace& s, const std::vector<Integer>& poly, long u, long v) {
  if (v <= 0) throw Error(ErrorKind::InvalidArgument, "denominator must be positive");
  const int deg = s.weight() - 2;
  Vector out(s.dimension());
  // Convergents p_j/q_j of u/v with p_{−1}/q_{−1} = 1/0, p_{−2}/q_{−2} = 0/1.
  long pm2 = 0, qm2 = 1, pm1 = 1, qm1 = 0;
  long num = u, den = v;
  while (true) {
    long a = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --a;
    const long pj = a * pm1 + pm2, qj = a * qm1 + qm2;
    // g = (p_j p_{j−1}; q_j q_{j−1}) has det (−1)^(j+1); flip the second
    // column when needed.
    Mat2 g{pj, pm1, qj, qm1};
    if (g.a * g.d - g.b * g.c == -1) {
      g.b = -g.b;
      g.d = -g.d;
    }
    out = add(out, s.manin_symbol(apply_matrix(poly, g, deg), g.c, g.d));
    pm2 = pm1;
    qm2 = qm1;
    pm1 = pj;
    qm1 = qj;
    const long rem = num - a * den;
    if (rem == 0) break;
    num = den;
    den = rem;
  }
  return out;
}

ManinPeriods manin_periods(const ModularSymbolSpace& s, const EigenformData& f, double precision,
                           std::vector<Integer> a) {
  if (!f.newform()) throw Error(ErrorKind::InvalidArgument, "periods need a newform");
  const long n = s.level();
  const int k = s.weight();
  // Cycles {∞, γ∞} for γ ∈ Γ₀(N); both endpoints of the q-series integrals
  // sit at height 1/c.
  std::vector<Cycle> cycles;
  // γ = (a b; c d) with c = c'N and |a|, |d| ≤ c/2, so |Re z| ≤ 1/2 and
  // the powers of z stay small. A few values of c' avoid cycles that all
  // lie in one eigen-line.
  long height = 0;
  for (long cc = 1; cc <= 6 && cycles.size() < 16 * static_cast<std::size_t>(k - 1); ++cc) {
    const long c = cc * n;
    auto symmetric = [c](long x) {
      x %= c;
      if (x < 0) x += c;
      return 2 * x > c ? x - c : x;
    };
    std::size_t used = 0;
    for (long t = 0; t <= c / 2 && used < 8; ++t)
      for (long d : {t, -t}) {
        if ((d == -t && (t == 0 || 2 * t == c)) || std::gcd(d, c) != 1 || used == 8) continue;
        long ai = 0;
        for (long r = 0; r < c; ++r)
          if ((r * ((d % c + c) % c)) % c == 1 % c) {
            ai = symmetric(r);
            break;
          }
        const long b = (ai * d - 1) / c;
        for (int m = 0; m <= k - 2; ++m) cycles.push_back({{ai, b, c, d}, m});
        ++used;
        height = c;
      }
  }
  // e^(−2πM/N)·M^((k+1)/2) below precision·1e−4
  const double target = std::log(precision * 1e-4);
  std::size_t terms = static_cast<std::size_t>(height) + 10;
  while (-kTwoPi * static_cast<double>(terms) / static_cast<double>(height) +
             0.5 * (k + 1) * std::log(static_cast<double>(terms)) >
         target)
    terms += static_cast<std::size_t>(height);
  const std::size_t longer = 2 * terms;
  if (a.size() <= longer) a = q_expansion(s, f, longer);
  const Fit first = fit_periods(s, f, a, terms, cycles);
  const Fit second = fit_periods(s, f, a, longer, cycles);
  ManinPeriods out;
  // Parity is forced by φ^± ∘ ι = ±φ^±; drop the rounding noise.
  out.plus = {second.plus.real(), 0};
  out.minus = {0, second.minus.imag()};
  out.residual = second.residual;
  out.error = std::max(std::abs(first.plus - second.plus) / std::abs(second.plus),
                       std::abs(first.minus - second.minus) / std::abs(second.minus));
  out.terms = longer;
  out.cycles = cycles.size();
  const double parity = std::max(std::abs(second.plus.imag() / second.plus.real()),
                                 std::abs(second.minus.real() / second.minus.imag()));
  if (out.residual > std::sqrt(precision) || out.error > precision || parity > std::sqrt(precision))
    throw Error(ErrorKind::PrecisionLoss, "period fit residual " + std::to_string(out.residual) +
                                              ", truncation change " + std::to_string(out.error));
  return out;
}

}  // namespace congrua
