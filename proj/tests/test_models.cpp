#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hypowalk/kern.hpp"
#include "hypowalk/lie.hpp"
#include "hypowalk/models.hpp"

using namespace hypowalk;

namespace {

double wrapped_dist(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

double pt_dist(const Model& m, Pt a, Pt b) {
  if (m.compact())
    return std::max(wrapped_dist(a[0], b[0]), wrapped_dist(a[1], b[1]));
  return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

std::mt19937_64 rng(20260825);

Pt random_point(const Model& m) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> upm(-2.0, 2.0);
  if (m.compact()) return {u01(rng), u01(rng)};
  return {upm(rng), upm(rng)};
}

}  // namespace

TEST_CASE("model registry") {
  CHECK(std::string(model_by_name("flat2").name()) == "flat2");
  CHECK(std::string(model_by_name("grushin2").name()) == "grushin2");
  CHECK(std::string(model_by_name("heis_lift").name()) == "heis_lift");
  CHECK_THROWS_AS(model_by_name("nope"), std::invalid_argument);
  CHECK(model_by_name("grushin2").step_r() == 2);
  CHECK(model_by_name("flat2").step_r() == 1);
  CHECK_FALSE(model_by_name("heis_lift").compact());
  CHECK_THROWS_AS(model_by_name("flat2").flow(3, 0.1, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(model_by_name("flat2").flow(0, 0.1, {0, 0}), std::invalid_argument);
}

TEST_CASE("closed-form flow values") {
  const auto& flat = model_by_name("flat2");
  auto z = flat.flow(1, 0.3, {0.9, 0.5});
  CHECK(z[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(z[1] == 0.5);

  const auto& gru = model_by_name("grushin2");
  // sin(2 pi 0.25) = 1: the y-flow is a unit-speed translation
  auto a = gru.flow(2, 0.17, {0.25, 0.4});
  CHECK(a[0] == 0.25);
  CHECK(a[1] == doctest::Approx(0.57).epsilon(1e-15));
  // sin(2 pi 0.5) = 0: stationary point
  auto b = gru.flow(2, 5.0, {0.5, 0.4});
  CHECK(b[0] == 0.5);
  CHECK(b[1] == 0.4);

  const auto& heis = model_by_name("heis_lift");
  auto c = heis.flow(2, 0.3, {2.0, 1.0});
  CHECK(c[0] == 2.0);
  CHECK(c[1] == doctest::Approx(1.6).epsilon(1e-15));
}

TEST_CASE("flow group law and measure preservation") {
  std::uniform_real_distribution<double> ut(-0.4, 0.4);
  for (const char* name : {"flat2", "grushin2", "heis_lift"}) {
    const auto& m = model_by_name(name);
    for (int probe = 0; probe < 100; ++probe) {
      const Pt x = random_point(m);
      for (int k = 1; k <= m.p(); ++k) {
        const double s = ut(rng), t = ut(rng);
        // additivity flow(k,s,flow(k,t,x)) = flow(k,s+t,x)
        const Pt a = m.flow(k, s, m.flow(k, t, x));
        const Pt b = m.flow(k, s + t, x);
        CHECK(pt_dist(m, a, b) < 1e-12);
        // inverse
        CHECK(pt_dist(m, m.flow(k, -t, m.flow(k, t, x)), x) < 1e-12);

        // empirical Jacobian determinant of x -> flow(k,t,x) equals 1
        const double d = 1e-6;
        auto fd = [&](Pt y) { return m.flow(k, t, y); };
        const Pt xe = {x[0] + d, x[1]}, xw = {x[0] - d, x[1]};
        const Pt yn = {x[0], x[1] + d}, ys = {x[0], x[1] - d};
        auto diff = [&](double u, double v) {
          // wrapped central difference
          double r = u - v;
          if (m.compact()) {
            if (r > 0.5) r -= 1.0;
            if (r < -0.5) r += 1.0;
          }
          return r / (2 * d);
        };
        const Pt fe = fd(xe), fw = fd(xw), fn = fd(yn), fs = fd(ys);
        const double j00 = diff(fe[0], fw[0]), j01 = diff(fn[0], fs[0]);
        const double j10 = diff(fe[1], fw[1]), j11 = diff(fn[1], fs[1]);
        CHECK(std::abs(j00 * j11 - j01 * j10 - 1.0) < 1e-8);
      }
    }
  }
}

TEST_CASE("divergence residuals") {
  for (const char* name : {"flat2", "grushin2", "heis_lift"}) {
    const auto& m = model_by_name(name);
    for (int probe = 0; probe < 100; ++probe) {
      const Pt x = random_point(m);
      for (int k = 1; k <= m.p(); ++k)
        CHECK(std::abs(divergence_residual(m, k, x)) <= 1e-8);
    }
  }
  // exact zeros where the coefficient is constant along its own direction
  CHECK(divergence_residual(model_by_name("flat2"), 1, {0.3, 0.7}) == 0.0);
  CHECK(divergence_residual(model_by_name("grushin2"), 1, {0.3, 0.7}) == 0.0);
}

TEST_CASE("bracket spanning condition at probe points") {
  const auto& flat = model_by_name("flat2");
  const auto& gru = model_by_name("grushin2");
  const auto& heis = model_by_name("heis_lift");
  for (int probe = 0; probe < 100; ++probe) {
    CHECK(hormander_rank(flat, random_point(flat)) == 2);
    CHECK(hormander_rank(gru, random_point(gru)) == 2);
    CHECK(hormander_rank(heis, random_point(heis)) == 2);
  }
  // at sin(2 pi x) = 0 the two fields alone are rank 1; the bracket restores 2
  for (double x0 : {0.0, 0.5}) {
    const auto frame = gru.bracket_frame({x0, 0.3});
    const double d01 = frame[0][0] * frame[1][1] - frame[0][1] * frame[1][0];
    CHECK(std::abs(d01) < 1e-12);  // X1, X2 degenerate here
    CHECK(hormander_rank(gru, {x0, 0.3}) == 2);
  }
  CHECK(hormander_rank(heis, {0.0, 0.9}) == 2);  // bracket d/dy saves x = 0
}

TEST_CASE("lift flow closed form") {
  CHECK(lift_flow({1, 0, 0}, {0, 0}) == Pt{1, 0});
  const Pt p{0.4, -0.7};
  CHECK(lift_flow({0, 0, 2.5}, p) == Pt{0.4, 1.8});
  auto q = lift_flow({1, 1, 0}, {0, 0});
  CHECK(q[0] == 1.0);
  CHECK(q[1] == 0.5);
}

TEST_CASE("group-commutator of heis_lift flows moves y by exactly t1*t2") {
  const auto& heis = model_by_name("heis_lift");
  std::uniform_real_distribution<double> ut(-0.5, 0.5);
  for (int rep = 0; rep < 50; ++rep) {
    const double t1 = ut(rng), t2 = ut(rng);
    const Pt x = random_point(heis);
    // e^{-t2 X2} e^{-t1 X1} e^{t2 X2} e^{t1 X1} applied left to right
    Pt z = heis.flow(1, t1, x);
    z = heis.flow(2, t2, z);
    z = heis.flow(1, -t1, z);
    z = heis.flow(2, -t2, z);
    CHECK(z[0] == doctest::Approx(x[0]).epsilon(1e-15));
    CHECK(z[1] - x[1] == doctest::Approx(t1 * t2).epsilon(1e-12));
  }
}

TEST_CASE("lift flow agrees with the walk word through the Heisenberg group") {
  // evaluate the commutator word in the free step-2 group, then push the
  // group element through the lift: must equal composing the plane flows
  const auto& heis = model_by_name("heis_lift");
  auto s = LieStructure::build_free_nilpotent(2, 2);
  const auto word = s.commutator_word({1, 2});
  std::uniform_real_distribution<double> ut(-0.5, 0.5);
  for (int rep = 0; rep < 20; ++rep) {
    const double t1 = ut(rng), t2 = ut(rng);
    const Pt x = random_point(heis);
    const auto g = s.evaluate_word<double>(word, {t1, t2});
    const Pt via_lift = lift_flow({g[0], g[1], g[2]}, x);
    Pt z = x;
    for (const auto& l : word)
      z = heis.flow(l.gen + 1, (l.sign > 0 ? 1.0 : -1.0) * (l.slot == 0 ? t1 : t2), z);
    CHECK(via_lift[0] == doctest::Approx(z[0]).epsilon(1e-13));
    CHECK(via_lift[1] == doctest::Approx(z[1]).epsilon(1e-13));
  }
}

TEST_CASE("grushin2 flow matches the sampling kernel bit for bit") {
  const auto& gru = model_by_name("grushin2");
  const double h = 0.1;
  const std::uint64_t seed = 4242;
  for (int w = 0; w < 10; ++w) {
    Pt z{0.37, 0.62};
    const std::uint64_t key = kern::walker_key(seed, w);
    for (std::uint64_t s = 0; s < 300; ++s) {
      const auto axis = kern::bounded(kern::draw_u64(key, 2 * s), 2);
      const double t =
          std::fma(kern::u01(kern::draw_u64(key, 2 * s + 1)), 2.0 * h, -h);
      z = gru.flow(static_cast<int>(axis) + 1, t, z);
    }
    double xk = 0.37, yk = 0.62;
    kern::scalar_kernels().walk_grushin2(&xk, &yk, 1, seed, w, 0, 300, h);
    CHECK(z[0] == xk);
    CHECK(z[1] == yk);
  }
}
