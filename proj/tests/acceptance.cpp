// Acceptance harness: argv[1] selects one numbered criterion; each run prints
// a single PASS/FAIL line with the measured quantities and pinned tolerances
// and exits 0 iff the criterion holds.  Criterion 3 documents a known failure
// of its fixed-eps flat-torus clause (the drift of the (+-2,0),(0,+-2) modes
// at h = 0.05 exceeds the pinned matching radius); the drift-aware cross-check
// on the same data is printed alongside.

#include <hypowalk/config.hpp>
#include <hypowalk/fourier.hpp>
#include <hypowalk/galerkin.hpp>
#include <hypowalk/kern.hpp>
#include <hypowalk/lie.hpp>
#include <hypowalk/models.hpp>
#include <hypowalk/sampler.hpp>
#include <hypowalk/spectra.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

using namespace hypowalk;

namespace {

int hw_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

constexpr double kNu = M_PI * M_PI / 3.0;

// ---------------------------------------------------------------------------
// 1. transfer spectrum against the closed-form sinc symbol

bool crit1(std::string& msg) {
  const Model& m = model_by_name("flat2");
  const int M = 16;
  double worst = 0.0;
  for (const double h : {0.2, 0.1, 0.05}) {
    const EigenDecomp ed = eigen_decompose(assemble_transfer(m, h, M, 32));
    std::vector<double> oracle;
    for (int n = -M; n <= M; ++n)
      for (int mm = -M; mm <= M; ++mm)
        oracle.push_back(0.5 * (sinc(2.0 * M_PI * mm * h) +
                                sinc(2.0 * M_PI * n * h)));
    std::sort(oracle.rbegin(), oracle.rend());
    for (std::size_t i = 0; i < oracle.size(); ++i)
      worst = std::max(worst, std::abs(ed.order[i].value - oracle[i]));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "flat2 eigenvalues vs sinc symbol, h in {0.2,0.1,0.05}, M=16: "
                "max dev %.3e (tol 1e-10)", worst);
  msg = buf;
  return worst <= 1e-10;
}

// ---------------------------------------------------------------------------
// 2. gap scaling g(h)/h^2 -> pi^2/3

bool crit2(std::string& msg) {
  const GapScalingFit fit =
      gap_scaling_fit(model_by_name("flat2"), {0.2, 0.1, 0.05}, 16, 32);
  const double rel_rich = std::abs(fit.nu_hat - kNu) / kNu;
  const double rel_raw = std::abs(fit.gap_over_h2.back() - kNu) / kNu;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "flat2 Richardson nu_hat %.6f vs pi^2/3 %.6f: rel err %.2e "
                "(tol 1e-3); raw g(0.05)/h^2 rel err %.2e (tol 1e-2)",
                fit.nu_hat, kNu, rel_rich, rel_raw);
  msg = buf;
  return rel_rich <= 1e-3 && rel_raw <= 1e-2;
}

// ---------------------------------------------------------------------------
// 3. cluster multiplicities (flat2 fixed eps, grushin2 drift-scaled eps)

bool crit3(std::string& msg) {
  // flat2 clause with the pinned matching radius eps = 0.1
  const Model& mf = model_by_name("flat2");
  const EigenDecomp edf = eigen_decompose(assemble_transfer(mf, 0.05, 16, 32));
  const std::vector<double> rescf = rescaled_low_spectrum(edf, 15.0);
  const std::vector<OracleCluster> orf =
      generator_cluster_oracle(mf, 16, 17.0, 0.2);
  const ClusterReport repf = cluster_match(rescf, orf, 0.1, 15.0);
  const bool flat_ok = repf.ok;

  // the same data matched with eps = 5x the observed drift
  const ClusterReport probef = cluster_match(rescf, orf, 2.0, 15.0);
  const ClusterReport repf5 =
      cluster_match(rescf, orf, 5.0 * probef.max_drift, 15.0);
  const bool flat5_ok = repf5.ok;

  // grushin2 clause: eps = 5x the drift observed against the Hill-block oracle
  const Model& mg = model_by_name("grushin2");
  const EigenDecomp edg = eigen_decompose(assemble_transfer(mg, 0.02, 48, 32));
  const std::vector<double> rescg = rescaled_low_spectrum(edg, 30.0);
  const std::vector<OracleCluster> org =
      generator_cluster_oracle(mg, 48, 32.0, 0.2);
  const ClusterReport probeg = cluster_match(rescg, org, 1.0, 30.0);
  const double epsg = 5.0 * probeg.max_drift;
  const ClusterReport repg = cluster_match(rescg, org, epsg, 30.0);
  const bool gr_ok = repg.ok;
  int gr_clusters = 0;
  for (const Cluster& cl : repg.clusters)
    if (cl.m_found > 0) ++gr_clusters;

  char buf[420];
  std::snprintf(
      buf, sizeof buf,
      "flat2 h=0.05 R=15 eps=0.1: counts %s (%zu unmatched, drift %.4f > eps; "
      "eps=5*drift rematch %s) | grushin2 h=0.02 M=48 R=30 eps=%.3f: %s "
      "(%d clusters, drift %.4f, %zu unmatched)",
      flat_ok ? "match" : "MISMATCH", repf.unmatched.size(), probef.max_drift,
      flat5_ok ? "matches" : "fails", epsg, gr_ok ? "all matched" : "MISMATCH",
      gr_clusters, repg.max_drift, repg.unmatched.size());
  msg = buf;
  return flat_ok && gr_ok;
}

// ---------------------------------------------------------------------------
// 4. generator limit: (f - T_h f)/h^2 -> L f at fourth-order h^2 rate

bool crit4(std::string& msg) {
  const std::vector<double> hs{0.1, 0.05, 0.025};
  const ConsistencyReport a = generator_consistency(
      model_by_name("flat2"), {{1, 0, 1.0}, {0, 1, 1.0}}, hs, 16, 16);
  const ConsistencyReport b =
      generator_consistency(model_by_name("grushin2"), {{0, 1, 1.0}}, hs, 16, 16);
  bool ok = true;
  double lo = 1e300, hi = 0.0;
  for (const ConsistencyReport* r : {&a, &b})
    for (const double q : r->ratios) {
      ok = ok && q >= 3.5 && q <= 4.5;
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "error ratios e(h)/e(h/2) in [%.3f, %.3f] (band [3.5, 4.5]), "
                "flat2 cos(2pix)+cos(2piy) and grushin2 cos(2piy), h=0.1->0.025",
                lo, hi);
  msg = buf;
  return ok;
}

// ---------------------------------------------------------------------------
// 5. TV decay rate: MC fit vs spectral gap, matrix powers vs log(1-g)

bool crit5(std::string& msg) {
  const Model& m = model_by_name("flat2");
  const TvDecayReport tv =
      tv_decay_rate(m, 0.1, 200000, 20250825, 32, 150, 5, 16, 32, hw_threads());
  const MatrixSlopeReport ms =
      tv_matrix_slope(m, 0.1, {0.0, 0.0}, 16, 32, 128, 450, 650, 10);
  const double slope_dev = std::abs(ms.slope - ms.expected);
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "flat2 h=0.1 N_w=2e5 B=32: MC rate/gap %.4f (band [0.85, 1.15], "
                "gap %.6f); matrix slope dev %.2e (tol 1e-6)",
                tv.ratio, tv.gap, slope_dev);
  msg = buf;
  return tv.ratio >= 0.85 && tv.ratio <= 1.15 && slope_dev <= 1e-6;
}

// ---------------------------------------------------------------------------
// 6. diffusion limit: MC vs tau^400, defect contraction under h -> h/2

bool crit6(std::string& msg) {
  const Model& m = model_by_name("flat2");
  const TrigPoly f{{1, 0, 1.0}};
  const DiffusionReport d1 =
      diffusion_limit_test(m, 0.05, 1.0, f, {0.0, 0.0}, 200000, 99, 16, 32,
                           hw_threads());
  const DiffusionReport d2 =
      diffusion_limit_test(m, 0.025, 1.0, f, {0.0, 0.0}, 200000, 99, 16, 32,
                           hw_threads());

  // recompute both targets from the sinc multiplier
  const double tau = 0.5 * (1.0 + sinc(2.0 * M_PI * 0.05));
  const double tau_n = std::pow(tau, 400);
  const double semi = std::exp(-kNu);
  const bool targets_ok = d1.n == 400 &&
                          std::abs(d1.matrix_value - tau_n) <= 1e-10 &&
                          std::abs(d1.semigroup_value - semi) <= 1e-10;
  const double contraction = std::abs(d1.matrix_value - d1.semigroup_value) /
                             std::abs(d2.matrix_value - d2.semigroup_value);
  char buf[260];
  std::snprintf(buf, sizeof buf,
                "flat2 cos(2pix) t=1 h=0.05: z %.2f (|z|<=3), tau^400 %.8f / "
                "e^{-pi^2/3} %.8f reproduced to 1e-10: %s; defect contraction "
                "%.3f at h->h/2 (band [3.5, 4.5])",
                d1.z, tau_n, semi, targets_ok ? "yes" : "NO", contraction);
  msg = buf;
  return std::abs(d1.z) <= 3.0 && targets_ok && contraction >= 3.5 &&
         contraction <= 4.5;
}

// ---------------------------------------------------------------------------
// 7. minorization constant and S-mass identity

bool crit7(std::string& msg) {
  const Model& m = model_by_name("flat2");
  const LieStructure L =
      LieStructure::build_free_nilpotent(m.p(), m.step_r());
  const MinorizationReport r = minorization_ratio(
      m, L, 0.1, 0.5, {0.0, 0.0}, 1000000, 16, 31, hw_threads());
  const double mass_dev = std::abs(r.s_mass - r.s_mass_expected);
  const bool mass_ok = mass_dev <= 3.0 * r.s_mass_sigma;
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "flat2 h=0.1 eps=0.5 N_s=1e6: c_hat %.5f (>= 0.08, theory 1/8), "
                "S-mass %.5f vs (2eps)^D = %.1f within 3 sigma (%.5f): %s",
                r.c_hat, r.s_mass, r.s_mass_expected, 3.0 * r.s_mass_sigma,
                mass_ok ? "yes" : "NO");
  msg = buf;
  return r.c_hat >= 0.08 && mass_ok;
}

// ---------------------------------------------------------------------------
// 8. Lie kernel: Witt dims, Jacobi, BCH associativity, closed forms

double rnd_pm_half(std::uint64_t key, std::uint64_t& ctr) {
  return kern::u01(kern::draw_u64(key, ctr++)) - 0.5;
}

bool crit8(std::string& msg) {
  const auto witt = [](int p, int n) {
    const auto mobius = [](int m) {
      int r = 1;
      for (int d = 2; d * d <= m; ++d)
        if (m % d == 0) {
          int c = 0;
          while (m % d == 0) m /= d, ++c;
          if (c > 1) return 0;
          r = -r;
        }
      if (m > 1) r = -r;
      return r;
    };
    long long s = 0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) {
        long long pk = 1;
        for (int i = 0; i < n / d; ++i) pk *= p;
        s += mobius(d) * pk;
      }
    return static_cast<int>(s / n);
  };

  bool dims_ok = true;
  double jmax = 0.0, amax = 0.0;
  for (int p = 1; p <= 3; ++p)
    for (int r = 1; r <= 4; ++r) {
      const LieStructure L = LieStructure::build_free_nilpotent(p, r);
      long long P = 0;
      const WalkConstants wc = L.walk_constants();
      for (int n = 1; n <= r; ++n) {
        const int dn = L.layer_dims()[static_cast<std::size_t>(n - 1)];
        dims_ok = dims_ok && dn == witt(p, n);
        P += dn * wc.b[static_cast<std::size_t>(n - 1)];
      }
      dims_ok = dims_ok && P == wc.P && wc.Q == L.Q();

      const std::uint64_t key =
          kern::walker_key(1, static_cast<std::uint64_t>(p * 8 + r));
      std::uint64_t ctr = 0;
      const auto rnd_vec = [&] {
        std::vector<double> v(static_cast<std::size_t>(L.dim()));
        for (double& x : v) x = rnd_pm_half(key, ctr);
        return v;
      };
      for (int it = 0; it < 100; ++it) {
        const auto x = rnd_vec(), y = rnd_vec(), z = rnd_vec();
        const auto j1 = L.bracket(x, L.bracket(y, z));
        const auto j2 = L.bracket(y, L.bracket(z, x));
        const auto j3 = L.bracket(z, L.bracket(x, y));
        const auto ab_c = L.product(L.product(x, y), z);
        const auto a_bc = L.product(x, L.product(y, z));
        for (std::size_t i = 0; i < static_cast<std::size_t>(L.dim()); ++i) {
          jmax = std::max(jmax, std::abs(j1[i] + j2[i] + j3[i]));
          amax = std::max(amax, std::abs(ab_c[i] - a_bc[i]));
        }
      }
    }

  const LieStructure L2 = LieStructure::build_free_nilpotent(2, 4);
  const WalkConstants wc2 = L2.walk_constants();
  bool b_ok = wc2.b[0] == 1 && wc2.b[1] == 4 && wc2.b[2] == 10;
  for (std::size_t n = 0; n < wc2.b.size(); ++n)
    b_ok = b_ok && wc2.b[n] == 3 * (1LL << n) - 2;

  bool heis_ok = true;
  {
    const LieStructure H = LieStructure::build_free_nilpotent(2, 2);
    const auto word = H.commutator_word({1, 2});
    const std::uint64_t key = kern::walker_key(1, 999);
    std::uint64_t ctr = 0;
    for (int it = 0; it < 10; ++it) {
      const double t1 = rnd_pm_half(key, ctr), t2 = rnd_pm_half(key, ctr);
      const auto z = H.evaluate_word<double>(word, {t1, t2});
      heis_ok = heis_ok && std::abs(z[0]) <= 1e-12 && std::abs(z[1]) <= 1e-12 &&
                std::abs(z[2] - t1 * t2) <= 1e-12;
    }
  }

  char buf[240];
  std::snprintf(buf, sizeof buf,
                "p<=3, r<=4: Witt dims + P,Q closed forms %s; Jacobi max %.2e, "
                "BCH assoc max %.2e (tol 1e-12, 100 triples); b=(1,4,10) %s; "
                "Heisenberg word -> (0,0,t1t2) %s",
                dims_ok ? "ok" : "BAD", jmax, amax, b_ok ? "ok" : "BAD",
                heis_ok ? "exact" : "BAD");
  msg = buf;
  return dims_ok && jmax <= 1e-12 && amax <= 1e-12 && b_ok && heis_ok;
}

// ---------------------------------------------------------------------------
// 9. Chapman-Taylor defect and spectral projector tails

bool crit9(std::string& msg) {
  const GalerkinOperator Tf =
      assemble_transfer(model_by_name("flat2"), 0.05, 16, 32);
  const Eigen::VectorXd f = trig_to_coeffs({{1, 0, 1.0}}, 16);
  const ChapmanReport ch = chapman_taylor_check(Tf, f, {0.5, 0.25, 0.125});

  const Model& mg = model_by_name("grushin2");
  const Eigen::VectorXd g = cfg::gaussian_coeffs(0.25, 16);
  std::vector<double> tails;
  for (const double h : {0.2, 0.1, 0.05})
    tails.push_back(
        spectral_projectors(assemble_transfer(mg, h, 16, 16), 0.25, g)
            .tail_supnorm);
  const double r1 = tails[1] / tails[0], r2 = tails[2] / tails[1];

  char buf[220];
  std::snprintf(buf, sizeof buf,
                "flat2 D(delta)/delta^2 variation %.3f (<= 2) over delta "
                "{0.5,0.25,0.125}; grushin2 projector tail ratios %.4f, %.4f "
                "(<= 0.3) over h {0.2,0.1,0.05}",
                ch.variation, r1, r2);
  msg = buf;
  return ch.variation <= 2.0 && r1 <= 0.3 && r2 <= 0.3;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..9>\n");
    return 2;
  }
  const int crit = std::atoi(argv[1]);
  bool (*fns[])(std::string&) = {crit1, crit2, crit3, crit4, crit5,
                                 crit6, crit7, crit8, crit9};
  if (crit < 1 || crit > 9) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..9>\n");
    return 2;
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::string msg;
  bool ok = false;
  try {
    ok = fns[crit - 1](msg);
  } catch (const std::exception& e) {
    msg = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("[%d] %s %s [%.1f s]\n", crit, ok ? "PASS" : "FAIL", msg.c_str(),
              secs);
  return ok ? 0 : 1;
}
