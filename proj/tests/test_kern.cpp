#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "hypowalk/kern.hpp"

using namespace hypowalk;

namespace {

double sin2pi_ref(double x) {
  // long-double reference; its own error is ~1e-18, far below the tolerance
  const long double pi_l = 3.14159265358979323846264338327950288L;
  return static_cast<double>(sinl(2.0L * pi_l * static_cast<long double>(x)));
}

std::vector<double> random01(std::size_t n, std::uint64_t seed) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = kern::u01(kern::draw_u64(seed, i));
  return v;
}

}  // namespace

TEST_CASE("sin2pi matches a long-double reference below 1e-15") {
  double worst = 0.0;
  for (int i = 0; i < 400000; ++i) {
    const double x = i / 400000.0;
    worst = std::max(worst, std::abs(kern::sin2pi(x) - sin2pi_ref(x)));
  }
  // adversarial points near quadrant boundaries and away from [0,1)
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1e-9, 1e-9);
  for (int q = -40; q <= 40; ++q)
    for (int rep = 0; rep < 200; ++rep) {
      const double x = 0.125 * q + u(rng);
      worst = std::max(worst, std::abs(kern::sin2pi(x) - sin2pi_ref(x)));
    }
  std::uniform_real_distribution<double> wide(-100.0, 100.0);
  for (int rep = 0; rep < 100000; ++rep) {
    const double x = wide(rng);
    worst = std::max(worst, std::abs(kern::sin2pi(x) - sin2pi_ref(x)));
  }
  CHECK(worst < 1e-15);
  // exact values at quarter periods
  CHECK(kern::sin2pi(0.0) == 0.0);
  CHECK(kern::sin2pi(0.25) == 1.0);
  CHECK(kern::sin2pi(0.5) == 0.0);
  CHECK(kern::sin2pi(0.75) == -1.0);
}

TEST_CASE("wrap01 lands in [0,1) including edge cases") {
  CHECK(kern::wrap01(0.3) == 0.3);
  CHECK(kern::wrap01(1.3) == doctest::Approx(0.3));
  CHECK(kern::wrap01(-0.25) == 0.75);
  CHECK(kern::wrap01(-1e-18) == 0.0);  // z - floor(z) rounds up to 1.0 here
  CHECK(kern::wrap01(0.0) == 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100000; ++i) {
    const double r = kern::wrap01(u(rng));
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
  }
}

TEST_CASE("counter RNG: determinism, uniformity, axis balance") {
  // same (seed, walker, counter) always gives the same draw
  CHECK(kern::draw_u64(kern::walker_key(7, 3), 11) ==
        kern::draw_u64(kern::walker_key(7, 3), 11));
  CHECK(kern::walker_key(7, 3) != kern::walker_key(7, 4));
  CHECK(kern::walker_key(7, 3) != kern::walker_key(8, 3));

  const std::size_t n = 1 << 20;
  auto u = random01(n, kern::walker_key(123, 0));
  double mean = 0.0, m2 = 0.0;
  for (double v : u) {
    mean += v;
    m2 += v * v;
  }
  mean /= n;
  m2 /= n;
  // mean 1/2 (sigma = 1/sqrt(12n)), second moment 1/3
  CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(m2 - 1.0 / 3.0) < 5e-3);
  for (double v : u) {
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }

  long long c0 = 0;
  const std::uint64_t key = kern::walker_key(9, 5);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = kern::bounded(kern::draw_u64(key, i), 2);
    REQUIRE(a <= 1);
    c0 += (a == 0);
  }
  CHECK(std::abs(c0 - double(n) / 2) < 5 * std::sqrt(n / 4.0));  // 5 sigma

  // Lemire bound is exact for p not a power of two as well
  for (std::uint32_t p : {3u, 5u, 7u}) {
    std::vector<long long> cnt(p, 0);
    for (std::size_t i = 0; i < 200000; ++i)
      ++cnt[kern::bounded(kern::draw_u64(key, i), p)];
    for (auto c : cnt)
      CHECK(std::abs(c - 200000.0 / p) < 5 * std::sqrt(200000.0 / p));
  }
}

TEST_CASE("walk kernels: determinism and segmented advancement") {
  const auto& K = kern::scalar_kernels();
  const std::size_t n = 257;
  std::vector<double> x1(n, 0.25), y1(n, 0.5), x2(n, 0.25), y2(n, 0.5);
  K.walk_grushin2(x1.data(), y1.data(), n, 99, 0, 0, 300, 0.1);
  // same walk in two segments: counters make the split invisible
  K.walk_grushin2(x2.data(), y2.data(), n, 99, 0, 0, 137, 0.1);
  K.walk_grushin2(x2.data(), y2.data(), n, 99, 0, 137, 163, 0.1);
  CHECK(std::memcmp(x1.data(), x2.data(), n * sizeof(double)) == 0);
  CHECK(std::memcmp(y1.data(), y2.data(), n * sizeof(double)) == 0);

  // chunked walkers: processing [0,100) and [100,n) separately is identical
  std::vector<double> x3(n, 0.25), y3(n, 0.5);
  K.walk_grushin2(x3.data(), y3.data(), 100, 99, 0, 0, 300, 0.1);
  K.walk_grushin2(x3.data() + 100, y3.data() + 100, n - 100, 99, 100, 0, 300, 0.1);
  CHECK(std::memcmp(x1.data(), x3.data(), n * sizeof(double)) == 0);
  CHECK(std::memcmp(y1.data(), y3.data(), n * sizeof(double)) == 0);

  // positions stay on the torus
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(x1[i] >= 0.0);
    CHECK(x1[i] < 1.0);
    CHECK(y1[i] >= 0.0);
    CHECK(y1[i] < 1.0);
  }
}

TEST_CASE("walk kernels agree with a naive per-step reference") {
  const auto& K = kern::scalar_kernels();
  const double h = 0.07;
  const std::uint64_t seed = 2026;
  for (int w = 0; w < 20; ++w) {
    double x = 0.3, y = 0.8;
    const std::uint64_t key = kern::walker_key(seed, w);
    for (std::uint64_t s = 0; s < 200; ++s) {
      const auto axis = kern::bounded(kern::draw_u64(key, 2 * s), 2);
      const double t =
          std::fma(kern::u01(kern::draw_u64(key, 2 * s + 1)), 2.0 * h, -h);
      if (axis == 0)
        x = kern::wrap01(x + t);
      else
        y = kern::wrap01(std::fma(t, kern::sin2pi(x), y));
    }
    double xk = 0.3, yk = 0.8;
    K.walk_grushin2(&xk, &yk, 1, seed, w, 0, 200, h);
    CHECK(xk == x);
    CHECK(yk == y);
  }
}

TEST_CASE("AVX2 kernels are bit-identical to scalar") {
  if (!kern::avx2_supported()) {
    MESSAGE("AVX2 not available on this host; skipping equivalence checks");
    return;
  }
#if HYPOWALK_HAVE_AVX2
  const auto& S = kern::scalar_kernels();
  const auto& V = kern::avx2_kernels();
  CHECK(std::string(V.isa) == "avx2");

  // sin2pi over a dense scan and wide random points
  std::vector<double> in(10007), out_s(in.size()), out_v(in.size());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> wide(-50.0, 50.0);
  for (std::size_t i = 0; i < in.size(); ++i)
    in[i] = (i < 5000) ? i / 5000.0 : wide(rng);
  S.sin2pi_batch(in.data(), out_s.data(), in.size());
  V.sin2pi_batch(in.data(), out_v.data(), in.size());
  CHECK(std::memcmp(out_s.data(), out_v.data(), in.size() * sizeof(double)) == 0);

  // all three walk kernels, non-multiple-of-4 walker count, nonzero w0/step0
  using Fn = kern::WalkFn;
  const Fn fns_s[3] = {S.walk_flat2, S.walk_grushin2, S.walk_heis2};
  const Fn fns_v[3] = {V.walk_flat2, V.walk_grushin2, V.walk_heis2};
  for (int m = 0; m < 3; ++m) {
    const std::size_t n = 1003;
    std::vector<double> xs(n, 0.37), ys(n, 0.62), xv(n, 0.37), yv(n, 0.62);
    fns_s[m](xs.data(), ys.data(), n, 77, 13, 5, 500, 0.1);
    fns_v[m](xv.data(), yv.data(), n, 77, 13, 5, 500, 0.1);
    CHECK(std::memcmp(xs.data(), xv.data(), n * sizeof(double)) == 0);
    CHECK(std::memcmp(ys.data(), yv.data(), n * sizeof(double)) == 0);
  }
#endif
}

TEST_CASE("kernel selection honors HYPOWALK_ISA") {
  setenv("HYPOWALK_ISA", "scalar", 1);
  CHECK(std::string(kern::select().isa) == "scalar");
  setenv("HYPOWALK_ISA", "bogus", 1);
  CHECK_THROWS_AS(kern::select(), std::runtime_error);
  unsetenv("HYPOWALK_ISA");
  const auto& k = kern::select();
  if (kern::avx2_supported())
    CHECK(std::string(k.isa) == "avx2");
  else
    CHECK(std::string(k.isa) == "scalar");
}
