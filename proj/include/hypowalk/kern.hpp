#pragma once

// Low-level sampling kernels: counter-based RNG, a polynomial sin(2*pi*x),
// and batched walk updates with scalar and AVX2 implementations selected at
// runtime.  Both implementations execute the same IEEE operation sequence per
// walker, so results are bit-identical across instruction sets, thread counts
// and chunk decompositions.

#include <cstddef>
#include <cstdint>

namespace hypowalk::kern {

// SplitMix64-style finalizer; statistically strong enough for MC sampling
// while being trivially reproducible from (seed, walker, step) counters.
inline std::uint64_t mix13(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// independent per-walker stream keys
inline std::uint64_t walker_key(std::uint64_t seed, std::uint64_t walker) noexcept {
  return mix13(seed + 0x9e3779b97f4a7c15ULL * walker);
}

// i-th draw of a stream
inline std::uint64_t draw_u64(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix13(key + 0xd1b54a32d192ed03ULL * counter);
}

// uniform in [0,1) with 52-bit resolution; exact integer-to-double conversion
inline double u01(std::uint64_t v) noexcept {
  return static_cast<double>(v >> 12) * 0x1.0p-52;
}

// Lemire bounded draw from the high 32 bits: uniform in {0,...,p-1}
inline std::uint32_t bounded(std::uint64_t v, std::uint32_t p) noexcept {
  const std::uint64_t hi = static_cast<std::uint32_t>(v >> 32);
  return static_cast<std::uint32_t>((hi * p) >> 32);
}

// z mod 1 in [0,1); the subtraction can round up to exactly 1.0 for tiny
// negative z, which the guard folds back to 0
double wrap01(double z) noexcept;

// sin(2*pi*x) by exact quadrant reduction plus a degree-15/16 Taylor pair;
// absolute error < 1e-15 for |x| < 1e6, identical bits on every ISA path
double sin2pi(double x) noexcept;

// Batched walk kernels.  Walkers w0..w0+n-1 (global indices) advance from
// step0 by nsteps; each step draws an axis k in {1,..,p} and a time t uniform
// in [-h,h] from the walker's counter stream and applies the model's exact
// flow.  Positions are updated in place.
using WalkFn = void (*)(double* x, double* y, std::size_t n, std::uint64_t seed,
                        std::uint64_t w0, std::uint64_t step0, std::uint64_t nsteps,
                        double h);

struct Kernels {
  const char* isa;
  void (*sin2pi_batch)(const double* in, double* out, std::size_t n);
  WalkFn walk_flat2;     // torus, X1 = d/dx, X2 = d/dy
  WalkFn walk_grushin2;  // torus, X1 = d/dx, X2 = sin(2 pi x) d/dy
  WalkFn walk_heis2;     // plane, X1 = d/dx, X2 = x d/dy
};

const Kernels& scalar_kernels() noexcept;
#if HYPOWALK_HAVE_AVX2
const Kernels& avx2_kernels() noexcept;
#endif

bool avx2_supported() noexcept;

// runtime selection; honors HYPOWALK_ISA = "scalar" | "avx2" (throws on an
// unknown value or an unavailable ISA)
const Kernels& select();

}  // namespace hypowalk::kern
