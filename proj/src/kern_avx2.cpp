#include "hypowalk/kern.hpp"

#if HYPOWALK_HAVE_AVX2

#include <immintrin.h>

// AVX2 kernels processing 4 walkers per vector.  Every floating-point
// operation (fma placement, masked zeroing, wrap, sin2pi polynomial) mirrors
// kern_scalar.cpp one-for-one; integer RNG is exact in both paths, so outputs
// are bit-identical to the scalar kernels.  Tails (n mod 4) fall through to
// the scalar functions, which produce the same bits by construction.

namespace hypowalk::kern {

namespace {

constexpr double SIN_C[8] = {
    0x1.921fb54442d18p+2,  -0x1.4abbce625be53p+5, 0x1.466bc6775aae2p+6,
    -0x1.32d2cce62bd86p+6, 0x1.50783487ee782p+5,  -0x1.e3074fde8871fp+3,
    0x1.e8f434d018d63p+1,  -0x1.6fadb9f155744p-1,
};
constexpr double COS_C[9] = {
    0x1.0000000000000p+0,  -0x1.3bd3cc9be45dep+4, 0x1.03c1f081b5ac4p+6,
    -0x1.55d3c7e3cbffap+6, 0x1.e1f506891babbp+5,  -0x1.a6d1f2a204a8cp+4,
    0x1.f9d38a3763cc3p+2,  -0x1.b6e24f44b128fp+0, 0x1.20c62c2f2d7f5p-2,
};

inline __m256i mullo64(__m256i a, __m256i b) {
  // 64x64 -> low 64 multiply from 32-bit pieces (no native op in AVX2)
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i ahi = _mm256_srli_epi64(a, 32);
  const __m256i bhi = _mm256_srli_epi64(b, 32);
  const __m256i cross =
      _mm256_add_epi64(_mm256_mul_epu32(ahi, b), _mm256_mul_epu32(a, bhi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix13_v(__m256i z) {
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
  z = mullo64(z, _mm256_set1_epi64x(0xbf58476d1ce4e5b9ULL));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
  z = mullo64(z, _mm256_set1_epi64x(0x94d049bb133111ebULL));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
  return z;
}

inline __m256i draw_v(__m256i key, std::uint64_t counter) {
  const std::uint64_t off = 0xd1b54a32d192ed03ULL * counter;
  return mix13_v(_mm256_add_epi64(key, _mm256_set1_epi64x(off)));
}

inline __m256d u01_v(__m256i v) {
  // (double)(v >> 12) * 2^-52, exact: the magic-or trick encodes the 52-bit
  // integer into the mantissa of 2^52
  const __m256i m = _mm256_or_si256(_mm256_srli_epi64(v, 12),
                                    _mm256_set1_epi64x(0x4330000000000000LL));
  const __m256d d = _mm256_sub_pd(_mm256_castsi256_pd(m), _mm256_set1_pd(0x1.0p52));
  return _mm256_mul_pd(d, _mm256_set1_pd(0x1.0p-52));
}

inline __m256i axis_v(__m256i v, std::uint32_t p) {
  const __m256i hi = _mm256_srli_epi64(v, 32);
  const __m256i prod = _mm256_mul_epu32(hi, _mm256_set1_epi64x(p));
  return _mm256_srli_epi64(prod, 32);
}

inline __m256d wrap01_v(__m256d z) {
  const __m256d r = _mm256_sub_pd(z, _mm256_floor_pd(z));
  const __m256d keep = _mm256_cmp_pd(r, _mm256_set1_pd(1.0), _CMP_LT_OQ);
  return _mm256_and_pd(r, keep);
}

inline __m256d sin2pi_v(__m256d x) {
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(_mm256_set1_pd(4.0), x),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(_mm256_set1_pd(0.25), q));
  const __m256d r2 = _mm256_mul_pd(r, r);
  __m256d ps = _mm256_set1_pd(SIN_C[7]);
  for (int k = 6; k >= 0; --k) ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(SIN_C[k]));
  ps = _mm256_mul_pd(ps, r);
  __m256d pc = _mm256_set1_pd(COS_C[8]);
  for (int k = 7; k >= 0; --k) pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(COS_C[k]));
  // quadrant bits of the integer q via the 1.5*2^52 mantissa trick (valid for
  // |q| < 2^51; 2^51 is divisible by 4 so the low bits are q mod 4)
  const __m256i qb = _mm256_castpd_si256(_mm256_add_pd(q, _mm256_set1_pd(0x1.8p52)));
  const __m256i bit0 = _mm256_and_si256(qb, _mm256_set1_epi64x(1));
  const __m256i bit1 = _mm256_and_si256(qb, _mm256_set1_epi64x(2));
  const __m256d swap = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(bit0, _mm256_set1_epi64x(1)));
  const __m256d neg = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(bit1, _mm256_set1_epi64x(2)));
  __m256d v = _mm256_blendv_pd(ps, pc, swap);
  return _mm256_xor_pd(v, _mm256_and_pd(neg, _mm256_set1_pd(-0.0)));
}

struct StepDraws {
  __m256i axis;
  __m256d t;
};

inline StepDraws step_draws_v(__m256i key, std::uint64_t step, __m256d negh,
                              __m256d twoh) {
  const __m256i v0 = draw_v(key, 2 * step);
  const __m256i v1 = draw_v(key, 2 * step + 1);
  StepDraws d;
  d.axis = axis_v(v0, 2);
  d.t = _mm256_fmadd_pd(u01_v(v1), twoh, negh);
  return d;
}

inline __m256i load_keys(std::uint64_t seed, std::uint64_t w0) {
  const __m256i gamma = _mm256_set1_epi64x(0x9e3779b97f4a7c15ULL);
  const __m256i w = _mm256_add_epi64(_mm256_set1_epi64x(w0),
                                     _mm256_set_epi64x(3, 2, 1, 0));
  return mix13_v(_mm256_add_epi64(_mm256_set1_epi64x(seed), mullo64(gamma, w)));
}

inline __m256d mask_axis(__m256i axis, long long which, __m256d t) {
  const __m256d m =
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(axis, _mm256_set1_epi64x(which)));
  return _mm256_and_pd(t, m);
}

void sin2pi_batch_avx2(const double* in, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, sin2pi_v(_mm256_loadu_pd(in + i)));
  if (i < n) scalar_kernels().sin2pi_batch(in + i, out + i, n - i);
}

void walk_flat2_avx2(double* x, double* y, std::size_t n, std::uint64_t seed,
                     std::uint64_t w0, std::uint64_t step0, std::uint64_t nsteps,
                     double h) {
  const __m256d twoh = _mm256_set1_pd(2.0 * h);
  const __m256d negh = _mm256_set1_pd(-h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i key = load_keys(seed, w0 + i);
    __m256d xi = _mm256_loadu_pd(x + i);
    __m256d yi = _mm256_loadu_pd(y + i);
    for (std::uint64_t s = step0; s < step0 + nsteps; ++s) {
      const StepDraws d = step_draws_v(key, s, negh, twoh);
      xi = wrap01_v(_mm256_add_pd(xi, mask_axis(d.axis, 0, d.t)));
      yi = wrap01_v(_mm256_add_pd(yi, mask_axis(d.axis, 1, d.t)));
    }
    _mm256_storeu_pd(x + i, xi);
    _mm256_storeu_pd(y + i, yi);
  }
  if (i < n)
    scalar_kernels().walk_flat2(x + i, y + i, n - i, seed, w0 + i, step0, nsteps, h);
}

void walk_grushin2_avx2(double* x, double* y, std::size_t n, std::uint64_t seed,
                        std::uint64_t w0, std::uint64_t step0, std::uint64_t nsteps,
                        double h) {
  const __m256d twoh = _mm256_set1_pd(2.0 * h);
  const __m256d negh = _mm256_set1_pd(-h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i key = load_keys(seed, w0 + i);
    __m256d xi = _mm256_loadu_pd(x + i);
    __m256d yi = _mm256_loadu_pd(y + i);
    for (std::uint64_t s = step0; s < step0 + nsteps; ++s) {
      const StepDraws d = step_draws_v(key, s, negh, twoh);
      const __m256d sv = sin2pi_v(xi);
      const __m256d t1 = mask_axis(d.axis, 1, d.t);
      xi = wrap01_v(_mm256_add_pd(xi, mask_axis(d.axis, 0, d.t)));
      yi = wrap01_v(_mm256_fmadd_pd(t1, sv, yi));
    }
    _mm256_storeu_pd(x + i, xi);
    _mm256_storeu_pd(y + i, yi);
  }
  if (i < n)
    scalar_kernels().walk_grushin2(x + i, y + i, n - i, seed, w0 + i, step0, nsteps, h);
}

void walk_heis2_avx2(double* x, double* y, std::size_t n, std::uint64_t seed,
                     std::uint64_t w0, std::uint64_t step0, std::uint64_t nsteps,
                     double h) {
  const __m256d twoh = _mm256_set1_pd(2.0 * h);
  const __m256d negh = _mm256_set1_pd(-h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i key = load_keys(seed, w0 + i);
    __m256d xi = _mm256_loadu_pd(x + i);
    __m256d yi = _mm256_loadu_pd(y + i);
    for (std::uint64_t s = step0; s < step0 + nsteps; ++s) {
      const StepDraws d = step_draws_v(key, s, negh, twoh);
      const __m256d t1 = mask_axis(d.axis, 1, d.t);
      yi = _mm256_fmadd_pd(t1, xi, yi);
      xi = _mm256_add_pd(xi, mask_axis(d.axis, 0, d.t));
    }
    _mm256_storeu_pd(x + i, xi);
    _mm256_storeu_pd(y + i, yi);
  }
  if (i < n)
    scalar_kernels().walk_heis2(x + i, y + i, n - i, seed, w0 + i, step0, nsteps, h);
}

}  // namespace

const Kernels& avx2_kernels() noexcept {
  static const Kernels k = {"avx2", sin2pi_batch_avx2, walk_flat2_avx2,
                            walk_grushin2_avx2, walk_heis2_avx2};
  return k;
}

}  // namespace hypowalk::kern

#endif  // HYPOWALK_HAVE_AVX2
