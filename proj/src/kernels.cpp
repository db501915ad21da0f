#include "congrua/kernels.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define CONGRUA_X86 1
#endif
#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#define CONGRUA_NEON 1
#endif

namespace congrua::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

Complex cdot_scalar(const double* ar, const double* ai, const double* br, const double* bi,
                    std::size_t n) {
  Complex s;
  for (std::size_t k = 0; k < n; ++k) {
    s.re += ar[k] * br[k] - ai[k] * bi[k];
    s.im += ar[k] * bi[k] + ai[k] * br[k];
  }
  return s;
}

#ifdef CONGRUA_X86
__attribute__((target("avx2,fma"))) double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

__attribute__((target("avx2,fma"))) Complex cdot_avx2(const double* ar, const double* ai,
                                                      const double* br, const double* bi,
                                                      std::size_t n) {
  __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + k), xi = _mm256_loadu_pd(ai + k);
    const __m256d yr = _mm256_loadu_pd(br + k), yi = _mm256_loadu_pd(bi + k);
    re = _mm256_fmadd_pd(xr, yr, re);
    re = _mm256_fnmadd_pd(xi, yi, re);
    im = _mm256_fmadd_pd(xr, yi, im);
    im = _mm256_fmadd_pd(xi, yr, im);
  }
  Complex s{hsum(re), hsum(im)};
  for (; k < n; ++k) {
    s.re += ar[k] * br[k] - ai[k] * bi[k];
    s.im += ar[k] * bi[k] + ai[k] * br[k];
  }
  return s;
}
#endif

#ifdef CONGRUA_NEON
double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t s = vdupq_n_f64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) s = vfmaq_f64(s, vld1q_f64(a + i), vld1q_f64(b + i));
  double r = vaddvq_f64(s);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

Complex cdot_neon(const double* ar, const double* ai, const double* br, const double* bi,
                  std::size_t n) {
  float64x2_t re = vdupq_n_f64(0), im = vdupq_n_f64(0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t xr = vld1q_f64(ar + k), xi = vld1q_f64(ai + k);
    const float64x2_t yr = vld1q_f64(br + k), yi = vld1q_f64(bi + k);
    re = vfmaq_f64(re, xr, yr);
    re = vfmsq_f64(re, xi, yi);
    im = vfmaq_f64(im, xr, yi);
    im = vfmaq_f64(im, xi, yr);
  }
  Complex s{vaddvq_f64(re), vaddvq_f64(im)};
  for (; k < n; ++k) {
    s.re += ar[k] * br[k] - ai[k] * bi[k];
    s.im += ar[k] * bi[k] + ai[k] * br[k];
  }
  return s;
}
#endif

Isa detect() {
  const char* force = std::getenv("CONGRUA_FORCE_SCALAR");
  if (force && std::strcmp(force, "0") != 0) return Isa::Scalar;
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "?";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#ifdef CONGRUA_X86
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#ifdef CONGRUA_NEON
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

double dot_with(Isa isa, const double* a, const double* b, std::size_t n) {
  switch (isa) {
#ifdef CONGRUA_X86
    case Isa::Avx2: return dot_avx2(a, b, n);
#endif
#ifdef CONGRUA_NEON
    case Isa::Neon: return dot_neon(a, b, n);
#endif
    default: return dot_scalar(a, b, n);
  }
}

Complex cdot_with(Isa isa, const double* ar, const double* ai, const double* br, const double* bi,
                  std::size_t n) {
  switch (isa) {
#ifdef CONGRUA_X86
    case Isa::Avx2: return cdot_avx2(ar, ai, br, bi, n);
#endif
#ifdef CONGRUA_NEON
    case Isa::Neon: return cdot_neon(ar, ai, br, bi, n);
#endif
    default: return cdot_scalar(ar, ai, br, bi, n);
  }
}

double dot(const double* a, const double* b, std::size_t n) { return dot_with(active_isa(), a, b, n); }

Complex cdot(const double* ar, const double* ai, const double* br, const double* bi, std::size_t n) {
  return cdot_with(active_isa(), ar, ai, br, bi, n);
}

}  // namespace congrua::kernels
