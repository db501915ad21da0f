#pragma once

// Floating point inner products used by the L-function and period sums.
// The scalar versions are the reference; vector versions are chosen at
// runtime and agree with them up to summation order.

#include <cstddef>
#include <string_view>

namespace congrua::kernels {

struct Complex {
  double re = 0;
  double im = 0;
};

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);
// The variant the dispatching entry points use. CONGRUA_FORCE_SCALAR=1 in the
// environment pins it to Scalar.
Isa active_isa();
bool isa_available(Isa isa);

// Σ a[i]·b[i]
double dot(const double* a, const double* b, std::size_t n);
// Σ (a_re + i a_im)[k]·(b_re + i b_im)[k]
Complex cdot(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
             std::size_t n);

// Explicit variants; calling one whose isa is unavailable is undefined.
double dot_with(Isa isa, const double* a, const double* b, std::size_t n);
Complex cdot_with(Isa isa, const double* a_re, const double* a_im, const double* b_re,
                  const double* b_im, std::size_t n);

}  // namespace congrua::kernels
