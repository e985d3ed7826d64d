#include "hypowalk/kern.hpp"

#include <cmath>

// Scalar reference kernels.  The AVX2 variants in kern_avx2.cpp mirror this
// operation sequence exactly (same fma placement, same masked-zero updates),
// which is what makes the two paths bit-identical.

namespace hypowalk::kern {

namespace {

// Taylor coefficients of sin(2*pi*r) = r * sum SIN_C[k] r^{2k} and
// cos(2*pi*r) = sum COS_C[k] r^{2k} on |r| <= 1/8, rounded from 60-digit
// arithmetic; truncation error < 5e-19
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

inline void step_draws(std::uint64_t key, std::uint64_t step, double h, double twoh,
                       std::uint32_t& axis, double& t) {
  const std::uint64_t v0 = draw_u64(key, 2 * step);
  const std::uint64_t v1 = draw_u64(key, 2 * step + 1);
  axis = bounded(v0, 2);
  t = std::fma(u01(v1), twoh, -h);  // uniform in [-h,h)
}

void sin2pi_batch_scalar(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = sin2pi(in[i]);
}

void walk_flat2_scalar(double* x, double* y, std::size_t n, std::uint64_t seed,
                       std::uint64_t w0, std::uint64_t step0, std::uint64_t nsteps,
                       double h) {
  const double twoh = 2.0 * h;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t key = walker_key(seed, w0 + i);
    double xi = x[i], yi = y[i];
    for (std::uint64_t s = step0; s < step0 + nsteps; ++s) {
      std::uint32_t axis;
      double t;
      step_draws(key, s, h, twoh, axis, t);
      const double t0 = (axis == 0) ? t : 0.0;
      const double t1 = (axis == 1) ? t : 0.0;
      xi = wrap01(xi + t0);
      yi = wrap01(yi + t1);
    }
    x[i] = xi;
    y[i] = yi;
  }
}

void walk_grushin2_scalar(double* x, double* y, std::size_t n, std::uint64_t seed,
                          std::uint64_t w0, std::uint64_t step0, std::uint64_t nsteps,
                          double h) {
  const double twoh = 2.0 * h;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t key = walker_key(seed, w0 + i);
    double xi = x[i], yi = y[i];
    for (std::uint64_t s = step0; s < step0 + nsteps; ++s) {
      std::uint32_t axis;
      double t;
      step_draws(key, s, h, twoh, axis, t);
      const double sv = sin2pi(xi);
      const double t0 = (axis == 0) ? t : 0.0;
      const double t1 = (axis == 1) ? t : 0.0;
      xi = wrap01(xi + t0);
      yi = wrap01(std::fma(t1, sv, yi));
    }
    x[i] = xi;
    y[i] = yi;
  }
}

void walk_heis2_scalar(double* x, double* y, std::size_t n, std::uint64_t seed,
                       std::uint64_t w0, std::uint64_t step0, std::uint64_t nsteps,
                       double h) {
  const double twoh = 2.0 * h;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t key = walker_key(seed, w0 + i);
    double xi = x[i], yi = y[i];
    for (std::uint64_t s = step0; s < step0 + nsteps; ++s) {
      std::uint32_t axis;
      double t;
      step_draws(key, s, h, twoh, axis, t);
      const double t0 = (axis == 0) ? t : 0.0;
      const double t1 = (axis == 1) ? t : 0.0;
      yi = std::fma(t1, xi, yi);  // X2 = x d/dy uses the pre-step x (t1 = 0 when x moves)
      xi = xi + t0;
    }
    x[i] = xi;
    y[i] = yi;
  }
}

}  // namespace

double wrap01(double z) noexcept {
  const double r = z - std::floor(z);
  return r < 1.0 ? r : 0.0;
}

double sin2pi(double x) noexcept {
  const double q = std::nearbyint(4.0 * x);
  const double r = x - 0.25 * q;  // exact: q*0.25 is within a factor 2 of x
  const double r2 = r * r;
  double ps = SIN_C[7];
  for (int k = 6; k >= 0; --k) ps = std::fma(ps, r2, SIN_C[k]);
  ps *= r;
  double pc = COS_C[8];
  for (int k = 7; k >= 0; --k) pc = std::fma(pc, r2, COS_C[k]);
  const long long qi = static_cast<long long>(q);
  const double v = (qi & 1) ? pc : ps;
  return (qi & 2) ? -v : v;
}

const Kernels& scalar_kernels() noexcept {
  static const Kernels k = {"scalar", sin2pi_batch_scalar, walk_flat2_scalar,
                            walk_grushin2_scalar, walk_heis2_scalar};
  return k;
}

}  // namespace hypowalk::kern
