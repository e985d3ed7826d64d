// hypowalk: configuration-driven experiment runner.
//
//   hypowalk <subcommand> --config PATH [--out DIR] [--seed N] [--threads N]
//
// Exit codes: 0 = run completed and every asserted check passed, 1 = a check
// failed (details in report.json), 2 = usage or configuration error (nothing
// is written).  Each run writes its declared CSV/JSON artifacts plus
// manifest.json; re-running from a manifest's embedded config reproduces
// byte-identical CSV bodies.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "hypowalk/config.hpp"
#include "hypowalk/galerkin.hpp"
#include "hypowalk/io.hpp"
#include "hypowalk/kern.hpp"
#include "hypowalk/lie.hpp"
#include "hypowalk/models.hpp"
#include "hypowalk/sampler.hpp"
#include "hypowalk/spectra.hpp"

using namespace hypowalk;
using cfg::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Run {
  json report;
  std::vector<std::pair<std::string, std::string>> files;  // name -> bytes
  bool ok = true;
};

// keys accepted in every config file
const std::vector<std::string> kGlobalKeys{"subcommand", "out", "seed"};

std::vector<std::string> with_globals(std::vector<std::string> keys) {
  keys.insert(keys.end(), kGlobalKeys.begin(), kGlobalKeys.end());
  return keys;
}

double rnd_pm_half(std::uint64_t key, std::uint64_t& ctr) {
  return kern::u01(kern::draw_u64(key, ctr++)) - 0.5;
}

// ---------------------------------------------------------------------------
// lie-check

int witt_dim(int p, int n) {
  const auto mobius = [](int m) {
    int r = 1;
    for (int d = 2; d * d <= m; ++d) {
      if (m % d == 0) {
        int c = 0;
        while (m % d == 0) {
          m /= d;
          ++c;
        }
        if (c > 1) return 0;
        r = -r;
      }
    }
    if (m > 1) r = -r;
    return r;
  };
  long long s = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    long long pk = 1;
    for (int i = 0; i < n / d; ++i) pk *= p;
    s += mobius(d) * pk;
  }
  return static_cast<int>(s / n);
}

Run run_lie_check(const json& c, int /*threads*/) {
  cfg::require_keys(c, with_globals({"p_max", "r_max", "n_triples", "tol"}),
                    "lie-check");
  const int p_max = static_cast<int>(cfg::get_int_or(c, "p_max", 3, 1, 3));
  const int r_max = static_cast<int>(cfg::get_int_or(c, "r_max", 4, 1, 4));
  const int n_triples =
      static_cast<int>(cfg::get_int_or(c, "n_triples", 100, 1, 100000));
  const double tol = cfg::get_num_or(c, "tol", 1e-12, 0.0, 1.0);
  const std::uint64_t seed =
      static_cast<std::uint64_t>(cfg::get_int_or(c, "seed", 1, 0, INT64_MAX));

  Run run;
  io::Csv csv;
  csv.header = {"p", "r", "dim", "Q", "P", "jacobi_max", "assoc_max"};
  bool dims_ok = true, jacobi_ok = true, assoc_ok = true;
  for (int p = 1; p <= p_max; ++p) {
    for (int r = 1; r <= r_max; ++r) {
      const LieStructure L = LieStructure::build_free_nilpotent(p, r);
      for (int n = 1; n <= r; ++n)
        dims_ok = dims_ok && L.layer_dims()[static_cast<std::size_t>(n - 1)] ==
                                 witt_dim(p, n);
      const WalkConstants wc = L.walk_constants();
      long long P = 0;
      for (int n = 1; n <= r; ++n)
        P += L.layer_dims()[static_cast<std::size_t>(n - 1)] *
             wc.b[static_cast<std::size_t>(n - 1)];
      dims_ok = dims_ok && P == wc.P && wc.Q == L.Q();

      const std::uint64_t key =
          kern::walker_key(seed, static_cast<std::uint64_t>(p * 8 + r));
      std::uint64_t ctr = 0;
      const auto rnd_vec = [&]() {
        std::vector<double> v(static_cast<std::size_t>(L.dim()));
        for (double& x : v) x = rnd_pm_half(key, ctr);
        return v;
      };
      double jmax = 0.0, amax = 0.0;
      for (int it = 0; it < n_triples; ++it) {
        const auto x = rnd_vec(), y = rnd_vec(), z = rnd_vec();
        const auto j1 = L.bracket(x, L.bracket(y, z));
        const auto j2 = L.bracket(y, L.bracket(z, x));
        const auto j3 = L.bracket(z, L.bracket(x, y));
        for (int i = 0; i < L.dim(); ++i)
          jmax = std::max(jmax, std::abs(j1[static_cast<std::size_t>(i)] +
                                         j2[static_cast<std::size_t>(i)] +
                                         j3[static_cast<std::size_t>(i)]));
        const auto ab_c = L.product(L.product(x, y), z);
        const auto a_bc = L.product(x, L.product(y, z));
        for (int i = 0; i < L.dim(); ++i)
          amax = std::max(amax, std::abs(ab_c[static_cast<std::size_t>(i)] -
                                         a_bc[static_cast<std::size_t>(i)]));
      }
      jacobi_ok = jacobi_ok && jmax <= tol;
      assoc_ok = assoc_ok && amax <= tol;
      csv.rows.push_back({io::fmt_int(p), io::fmt_int(r), io::fmt_int(L.dim()),
                          io::fmt_int(L.Q()), io::fmt_int(wc.P),
                          io::fmt_float(jmax), io::fmt_float(amax)});
    }
  }

  // closed forms for two generators: b = (1, 4, 10, ...) with b_n = 3*2^(n-1)-2
  bool b_ok = true;
  {
    const LieStructure L = LieStructure::build_free_nilpotent(2, std::max(3, r_max));
    const WalkConstants wc = L.walk_constants();
    for (std::size_t n = 0; n < wc.b.size(); ++n)
      b_ok = b_ok && wc.b[n] == 3 * (1LL << n) - 2;
    b_ok = b_ok && wc.b[0] == 1 && wc.b[1] == 4 && wc.b[2] == 10;
  }

  // the Heisenberg commutator word lands exactly on (0, 0, t1 t2)
  bool heis_ok = true;
  {
    const LieStructure L = LieStructure::build_free_nilpotent(2, 2);
    const auto word = L.commutator_word({1, 2});
    const std::uint64_t key = kern::walker_key(seed, 999);
    std::uint64_t ctr = 0;
    for (int it = 0; it < 10; ++it) {
      const double t1 = rnd_pm_half(key, ctr), t2 = rnd_pm_half(key, ctr);
      const auto z = L.evaluate_word<double>(word, {t1, t2});
      heis_ok = heis_ok && std::abs(z[0]) <= tol && std::abs(z[1]) <= tol &&
                std::abs(z[2] - t1 * t2) <= tol;
    }
  }

  run.ok = dims_ok && jacobi_ok && assoc_ok && b_ok && heis_ok;
  run.report = {{"dims_ok", dims_ok},   {"jacobi_ok", jacobi_ok},
                {"assoc_ok", assoc_ok}, {"b_closed_form_ok", b_ok},
                {"heis_word_ok", heis_ok}};
  run.files.emplace_back("liecheck.csv", io::csv_to_string(csv));
  return run;
}

// ---------------------------------------------------------------------------
// spectrum

Run run_spectrum(const json& c, int /*threads*/) {
  cfg::require_keys(c, with_globals({"model", "operator", "h", "h_list", "M", "q"}),
                    "spectrum");
  const Model& m = model_by_name(cfg::get_str(c, "model"));
  const std::string op_kind = cfg::get_str_or(c, "operator", "transfer");
  if (op_kind != "transfer" && op_kind != "generator")
    throw std::invalid_argument("config: 'operator' must be transfer or generator");
  const int M = static_cast<int>(cfg::get_int(c, "M", 2, 256));
  const int q = static_cast<int>(cfg::get_int_or(c, "q", 32, 8, 128));

  std::vector<double> hs;
  if (op_kind == "transfer") {
    if (c.contains("h_list"))
      hs = cfg::get_num_list(c, "h_list", 1, 1e-6, 0.5);
    else
      hs = {cfg::get_num(c, "h", 1e-6, 0.5)};
  } else {
    hs = {0.0};
  }

  Run run;
  io::Csv csv;
  csv.header = {"h", "index", "block_n", "index_in_block", "value", "rescaled"};
  json per_h = json::array();
  for (const double h : hs) {
    const GalerkinOperator op = op_kind == "transfer"
                                    ? assemble_transfer(m, h, M, q)
                                    : assemble_generator(m, M);
    const EigenDecomp ed = eigen_decompose(op);
    long long idx = 0;
    for (const EigenPair& e : ed.order) {
      const double rescaled =
          op_kind == "transfer" ? (1.0 - e.value) / (h * h) : e.value;
      csv.rows.push_back({io::fmt_float(h), io::fmt_int(idx++),
                          io::fmt_int(e.block_n), io::fmt_int(e.index_in_block),
                          io::fmt_float(e.value), io::fmt_float(rescaled)});
    }

    json entry{{"h", h}};
    if (op_kind == "transfer") {
      const MarkovReport mk = markov_checks(op);
      const bool markov_ok = mk.const_defect <= 1e-12 &&
                             mk.symmetry_residual == 0.0 &&
                             mk.max_abs_eigenvalue <= 1.0 + 1e-10 && mk.top_simple;
      entry["gap"] = spectral_gap(ed);
      entry["markov"] = {{"const_defect", mk.const_defect},
                         {"symmetry_residual", mk.symmetry_residual},
                         {"max_abs_eigenvalue", mk.max_abs_eigenvalue},
                         {"min_eigenvalue", mk.min_eigenvalue},
                         {"second_eigenvalue", mk.second_eigenvalue},
                         {"top_simple", mk.top_simple}};
      run.ok = run.ok && markov_ok;

      if (std::string(m.name()) == "flat2") {
        // closed-form symbol oracle: every eigenvalue is a sinc average
        std::vector<double> oracle;
        oracle.reserve(static_cast<std::size_t>(op.dim()));
        for (int nn = -M; nn <= M; ++nn)
          for (int mm = -M; mm <= M; ++mm)
            oracle.push_back(0.5 * (sinc(2.0 * M_PI * mm * h) +
                                    sinc(2.0 * M_PI * nn * h)));
        std::sort(oracle.rbegin(), oracle.rend());
        double dev = 0.0;
        for (std::size_t i = 0; i < oracle.size(); ++i)
          dev = std::max(dev, std::abs(ed.order[i].value - oracle[i]));
        entry["oracle_max_dev"] = dev;
        run.ok = run.ok && dev <= 1e-10;
      }
    } else {
      double min_val = 0.0;
      for (const auto& vals : ed.values) min_val = std::min(min_val, vals.minCoeff());
      entry["min_eigenvalue"] = min_val;
      run.ok = run.ok && min_val >= -1e-9;
    }
    per_h.push_back(entry);
  }
  run.report = {{"model", m.name()}, {"operator", op_kind}, {"per_h", per_h}};
  run.files.emplace_back("spectrum.csv", io::csv_to_string(csv));
  return run;
}

// ---------------------------------------------------------------------------
// gap-scan

Run run_gap_scan(const json& c, int /*threads*/) {
  cfg::require_keys(c, with_globals({"model", "h_list", "M", "q"}), "gap-scan");
  const Model& m = model_by_name(cfg::get_str(c, "model"));
  const std::vector<double> hs = cfg::get_num_list(c, "h_list", 2, 1e-6, 0.5);
  const int M = static_cast<int>(cfg::get_int(c, "M", 2, 256));
  const int q = static_cast<int>(cfg::get_int_or(c, "q", 32, 8, 128));

  const GapScalingFit fit = gap_scaling_fit(m, hs, M, q);

  Run run;
  io::Csv csv;
  csv.header = {"h", "gap", "gap_over_h2"};
  for (std::size_t i = 0; i < fit.hs.size(); ++i)
    csv.rows.push_back({io::fmt_float(fit.hs[i]), io::fmt_float(fit.gaps[i]),
                        io::fmt_float(fit.gap_over_h2[i])});
  run.ok = fit.in_band && fit.monotone;
  run.report = {{"model", m.name()},     {"nu_hat", fit.nu_hat},
                {"order", fit.order},    {"band_lo", fit.band_lo},
                {"band_hi", fit.band_hi}, {"in_band", fit.in_band},
                {"monotone", fit.monotone}};
  run.files.emplace_back("gapscan.csv", io::csv_to_string(csv));
  return run;
}

// ---------------------------------------------------------------------------
// cluster

Run run_cluster(const json& c, int /*threads*/) {
  cfg::require_keys(c, with_globals({"model", "h", "M", "q", "R", "eps",
                                     "group_tol", "oracle_margin"}),
                    "cluster");
  const Model& m = model_by_name(cfg::get_str(c, "model"));
  const double h = cfg::get_num(c, "h", 1e-6, 0.5);
  const int M = static_cast<int>(cfg::get_int(c, "M", 2, 256));
  const int q = static_cast<int>(cfg::get_int_or(c, "q", 32, 8, 128));
  const double R = cfg::get_num(c, "R", 1e-6, 1e6);
  const double eps = cfg::get_num(c, "eps", 1e-12, 1e6);
  const double group_tol = cfg::get_num_or(c, "group_tol", 0.2, 1e-9, 10.0);
  const double margin = cfg::get_num_or(c, "oracle_margin", 2.0, 0.0, 100.0);

  const GalerkinOperator op = assemble_transfer(m, h, M, q);
  const EigenDecomp ed = eigen_decompose(op);
  const double gap = spectral_gap(ed);
  const std::vector<double> resc = rescaled_low_spectrum(ed, R);
  const std::vector<OracleCluster> oracle =
      generator_cluster_oracle(m, M, R + margin, group_tol);
  const ClusterReport rep = cluster_match(resc, oracle, eps, R);

  std::vector<double> lambdas;
  for (const OracleCluster& oc : oracle)
    if (oc.nu <= R) lambdas.push_back(oc.nu);
  const std::vector<WeylPoint> weyl = weyl_count(resc, lambdas);

  Run run;
  io::Csv csv;
  csv.header = {"nu", "m_expected", "m_found", "drift"};
  json jclusters = json::array();
  for (const Cluster& cl : rep.clusters) {
    double drift = 0.0;
    for (double v : cl.members) drift = std::max(drift, std::abs(v - cl.nu));
    csv.rows.push_back({io::fmt_float(cl.nu), io::fmt_int(cl.m_expected),
                        io::fmt_int(cl.m_found), io::fmt_float(drift)});
    jclusters.push_back({{"nu", cl.nu},
                         {"m_expected", cl.m_expected},
                         {"m_found", cl.m_found},
                         {"members", cl.members}});
  }
  json jweyl = json::array();
  for (const WeylPoint& w : weyl)
    jweyl.push_back({{"lambda", w.lambda}, {"count", w.count}});

  run.ok = rep.ok;
  run.report = {{"model", m.name()},
                {"h", h},
                {"gap", gap},
                {"nu_hat", gap / (h * h)},
                {"order", nullptr},
                {"clusters", jclusters},
                {"weyl", jweyl},
                {"unmatched", rep.unmatched},
                {"max_drift", rep.max_drift},
                {"intervals_overlap", rep.intervals_overlap}};
  run.files.emplace_back("cluster.csv", io::csv_to_string(csv));
  return run;
}

// ---------------------------------------------------------------------------
// walk-tv

Run run_walk_tv(const json& c, int threads) {
  cfg::require_keys(c, with_globals({"model", "h", "N_w", "B", "max_n", "stride",
                                     "M", "q", "ratio_lo", "ratio_hi",
                                     "matrix_check", "G", "n_lo", "n_hi",
                                     "matrix_stride", "matrix_tol"}),
                    "walk-tv");
  const Model& m = model_by_name(cfg::get_str(c, "model"));
  const double h = cfg::get_num(c, "h", 1e-6, 0.5);
  const long long N_w = cfg::get_int(c, "N_w", 10000, 20000000);
  const int B = static_cast<int>(cfg::get_int(c, "B", 2, 1024));
  const long long max_n = cfg::get_int(c, "max_n", 1, 1000000);
  const long long stride = cfg::get_int_or(c, "stride", 5, 1, 1000000);
  const int M = static_cast<int>(cfg::get_int_or(c, "M", 16, 2, 256));
  const int q = static_cast<int>(cfg::get_int_or(c, "q", 32, 8, 128));
  const double ratio_lo = cfg::get_num_or(c, "ratio_lo", 0.85, 0.0, 1.0);
  const double ratio_hi = cfg::get_num_or(c, "ratio_hi", 1.15, 1.0, 10.0);
  const bool matrix_check = cfg::get_bool_or(c, "matrix_check", false);
  const std::uint64_t seed =
      static_cast<std::uint64_t>(cfg::get_int_or(c, "seed", 1, 0, INT64_MAX));

  const TvDecayReport rep =
      tv_decay_rate(m, h, N_w, seed, B, max_n, stride, M, q, threads);

  Run run;
  io::Csv csv;
  csv.header = {"n", "tv_hat", "stderr", "floor"};
  for (std::size_t i = 0; i < rep.ns.size(); ++i)
    csv.rows.push_back({io::fmt_int(rep.ns[i]), io::fmt_float(rep.tv[i]),
                        io::fmt_float(rep.stderrs[i]), io::fmt_float(rep.floor)});

  const bool ratio_ok = rep.ratio >= ratio_lo && rep.ratio <= ratio_hi;
  run.ok = ratio_ok;
  run.report = {{"model", m.name()},
                {"h", h},
                {"rate", rep.rate},
                {"gap", rep.gap},
                {"ratio", rep.ratio},
                {"ratio_ok", ratio_ok},
                {"floor", rep.floor},
                {"fit_n_lo", rep.ns[rep.fit_begin]},
                {"fit_n_hi", rep.ns[rep.fit_end - 1]},
                {"envelope_violations", rep.envelope_violations}};

  if (matrix_check) {
    const int G = static_cast<int>(cfg::get_int_or(c, "G", 128, 8, 4096));
    const long long n_lo = cfg::get_int_or(c, "n_lo", 450, 1, 10000000);
    const long long n_hi = cfg::get_int_or(c, "n_hi", 650, 2, 10000000);
    const long long mstride = cfg::get_int_or(c, "matrix_stride", 10, 1, 1000000);
    const double mtol = cfg::get_num_or(c, "matrix_tol", 1e-6, 0.0, 1.0);
    const MatrixSlopeReport ms =
        tv_matrix_slope(m, h, {0.0, 0.0}, M, q, G, n_lo, n_hi, mstride);
    const bool mok = std::abs(ms.slope - ms.expected) <= mtol;
    run.report["matrix"] = {{"slope", ms.slope},
                            {"expected", ms.expected},
                            {"abs_diff", std::abs(ms.slope - ms.expected)},
                            {"tol", mtol},
                            {"ok", mok}};
    run.ok = run.ok && mok;
  }
  run.files.emplace_back("tv.csv", io::csv_to_string(csv));
  return run;
}

// ---------------------------------------------------------------------------
// diffuse

Run run_diffuse(const json& c, int threads) {
  cfg::require_keys(c, with_globals({"model", "h", "h_list", "t", "f", "x0",
                                     "N_w", "M", "q", "z_max", "contraction"}),
                    "diffuse");
  const Model& m = model_by_name(cfg::get_str(c, "model"));
  std::vector<double> hs;
  if (c.contains("h_list"))
    hs = cfg::get_num_list(c, "h_list", 1, 1e-6, 0.5);
  else
    hs = {cfg::get_num(c, "h", 1e-6, 0.5)};
  const double t = cfg::get_num(c, "t", 1e-9, 1e6);
  const TrigPoly f = cfg::parse_trig(c.at("f"));
  const std::array<double, 2> x0 = cfg::get_point_or(c, "x0", {0.0, 0.0});
  const long long N_w = cfg::get_int(c, "N_w", 10000, 20000000);
  const int M = static_cast<int>(cfg::get_int_or(c, "M", 16, 2, 256));
  const int q = static_cast<int>(cfg::get_int_or(c, "q", 32, 8, 128));
  const double z_max = cfg::get_num_or(c, "z_max", 4.0, 0.1, 100.0);
  std::vector<double> contraction;
  if (c.contains("contraction")) {
    contraction = cfg::get_num_list(c, "contraction", 2, 0.0, 1e6);
    if (contraction.size() != 2 || hs.size() < 2)
      throw std::invalid_argument(
          "config: 'contraction' needs [lo, hi] and at least two h values");
  }
  const std::uint64_t seed =
      static_cast<std::uint64_t>(cfg::get_int_or(c, "seed", 1, 0, INT64_MAX));

  Run run;
  io::Csv csv;
  csv.header = {"h", "t", "mc_mean", "mc_stderr", "matrix_value", "semigroup_value"};
  json rows = json::array();
  std::vector<double> defects;
  for (const double h : hs) {
    const DiffusionReport d =
        diffusion_limit_test(m, h, t, f, {x0[0], x0[1]}, N_w, seed, M, q, threads);
    csv.rows.push_back({io::fmt_float(h), io::fmt_float(t),
                        io::fmt_float(d.mc_mean), io::fmt_float(d.mc_stderr),
                        io::fmt_float(d.matrix_value),
                        io::fmt_float(d.semigroup_value)});
    rows.push_back({{"h", h},
                    {"n", d.n},
                    {"mc_mean", d.mc_mean},
                    {"mc_stderr", d.mc_stderr},
                    {"matrix_value", d.matrix_value},
                    {"semigroup_value", d.semigroup_value},
                    {"z", d.z}});
    defects.push_back(std::abs(d.matrix_value - d.semigroup_value));
    run.ok = run.ok && std::abs(d.z) <= z_max;
  }

  json ratios = json::array();
  for (std::size_t i = 0; i + 1 < defects.size(); ++i) {
    const double r = defects[i] / defects[i + 1];
    ratios.push_back(r);
    if (!contraction.empty())
      run.ok = run.ok && r >= contraction[0] && r <= contraction[1];
  }
  run.report = {{"model", m.name()}, {"t", t},       {"z_max", z_max},
                {"rows", rows},      {"defect_ratios", ratios}};
  run.files.emplace_back("diffusion.csv", io::csv_to_string(csv));
  return run;
}

// ---------------------------------------------------------------------------
// minorize

Run run_minorize(const json& c, int threads) {
  cfg::require_keys(c, with_globals({"model", "h", "eps", "x0", "N_s", "B",
                                     "c_min"}),
                    "minorize");
  const Model& m = model_by_name(cfg::get_str(c, "model"));
  const double h = cfg::get_num(c, "h", 1e-6, 0.5);
  const double eps = cfg::get_num(c, "eps", 1e-9, 100.0);
  const std::array<double, 2> x0 = cfg::get_point_or(c, "x0", {0.0, 0.0});
  const long long N_s = cfg::get_int(c, "N_s", 10000, 20000000);
  const int B = static_cast<int>(cfg::get_int(c, "B", 2, 512));
  const double c_min = cfg::get_num_or(c, "c_min", 0.0, 0.0, 1e6);
  const std::uint64_t seed =
      static_cast<std::uint64_t>(cfg::get_int_or(c, "seed", 1, 0, INT64_MAX));

  const LieStructure L = LieStructure::build_free_nilpotent(m.p(), m.step_r());
  const MinorizationReport rep =
      minorization_ratio(m, L, h, eps, {x0[0], x0[1]}, N_s, B, seed, threads);

  const bool mass_ok =
      std::abs(rep.s_mass - rep.s_mass_expected) <= 3.0 * rep.s_mass_sigma;
  Run run;
  run.ok = rep.c_hat >= c_min && mass_ok;
  const json payload{{"c_hat", rep.c_hat},
                     {"s_mass", rep.s_mass},
                     {"excluded_bins", rep.excluded_bins},
                     {"s_mass_sigma", rep.s_mass_sigma},
                     {"s_mass_expected", rep.s_mass_expected},
                     {"admitted_bins", rep.admitted_bins},
                     {"t_outside", rep.t_outside},
                     {"support_violation", rep.support_violation},
                     {"window_lo", rep.window_lo},
                     {"window_hi", rep.window_hi}};
  run.report = {{"model", m.name()}, {"c_min", c_min},
                {"c_ok", rep.c_hat >= c_min}, {"mass_ok", mass_ok}};
  run.files.emplace_back("minorization.json", payload.dump(2) + "\n");
  return run;
}

// ---------------------------------------------------------------------------
// consistency

Run run_consistency(const json& c, int /*threads*/) {
  cfg::require_keys(c, with_globals({"M", "q", "cases", "chapman", "projectors"}),
                    "consistency");
  const int M = static_cast<int>(cfg::get_int_or(c, "M", 16, 2, 256));
  const int q = static_cast<int>(cfg::get_int_or(c, "q", 16, 8, 128));
  if (!c.contains("cases") && !c.contains("chapman") && !c.contains("projectors"))
    throw std::invalid_argument(
        "config: consistency needs at least one of cases/chapman/projectors");

  Run run;
  json report;

  if (c.contains("cases")) {
    const json& cases = c.at("cases");
    if (!cases.is_array() || cases.empty())
      throw std::invalid_argument("config: 'cases' must be a nonempty array");
    io::Csv csv;
    csv.header = {"model", "h", "error"};
    json jcases = json::array();
    for (const json& one : cases) {
      cfg::require_keys(one, {"model", "h_list", "f"}, "consistency case");
      const Model& m = model_by_name(cfg::get_str(one, "model"));
      const std::vector<double> hs = cfg::get_num_list(one, "h_list", 2, 1e-6, 0.5);
      const TrigPoly f = cfg::parse_trig(one.at("f"));
      const ConsistencyReport rep = generator_consistency(m, f, hs, M, q);
      bool case_ok = true;
      for (double r : rep.ratios) case_ok = case_ok && r >= 3.5 && r <= 4.5;
      for (std::size_t i = 0; i < rep.hs.size(); ++i)
        csv.rows.push_back({m.name(), io::fmt_float(rep.hs[i]),
                            io::fmt_float(rep.errors[i])});
      jcases.push_back({{"model", m.name()},
                        {"errors", rep.errors},
                        {"ratios", rep.ratios},
                        {"ok", case_ok}});
      run.ok = run.ok && case_ok;
    }
    report["cases"] = jcases;
    run.files.emplace_back("consistency.csv", io::csv_to_string(csv));
  }

  if (c.contains("chapman")) {
    const json& ch = c.at("chapman");
    cfg::require_keys(ch, {"model", "h", "f", "deltas"}, "chapman");
    const Model& m = model_by_name(cfg::get_str(ch, "model"));
    const double h = cfg::get_num(ch, "h", 1e-6, 0.5);
    const TrigPoly f = cfg::parse_trig(ch.at("f"));
    const std::vector<double> deltas = cfg::get_num_list(ch, "deltas", 1, 1e-9, 1e6);
    const GalerkinOperator T = assemble_transfer(m, h, M, q);
    const ChapmanReport rep =
        chapman_taylor_check(T, trig_to_coeffs(f, M), deltas);
    io::Csv csv;
    csv.header = {"delta", "defect", "defect_over_delta2"};
    for (std::size_t i = 0; i < rep.deltas.size(); ++i)
      csv.rows.push_back({io::fmt_float(rep.deltas[i]),
                          io::fmt_float(rep.defect[i]),
                          io::fmt_float(rep.ratio[i])});
    const bool ch_ok = rep.variation <= 2.0;
    report["chapman"] = {{"model", m.name()},
                         {"variation", rep.variation},
                         {"ok", ch_ok}};
    run.ok = run.ok && ch_ok;
    run.files.emplace_back("chapman.csv", io::csv_to_string(csv));
  }

  if (c.contains("projectors")) {
    const json& pj = c.at("projectors");
    cfg::require_keys(pj, {"model", "h_list", "c4", "f"}, "projectors");
    const Model& m = model_by_name(cfg::get_str(pj, "model"));
    const std::vector<double> hs = cfg::get_num_list(pj, "h_list", 2, 1e-6, 0.5);
    const double c4 = cfg::get_num(pj, "c4", 1e-9, 1.0 - 1e-9);
    Eigen::VectorXd fvec;
    const json& fspec = pj.at("f");
    if (fspec.is_object()) {
      cfg::require_keys(fspec, {"gaussian"}, "projectors.f");
      fvec = cfg::gaussian_coeffs(cfg::get_num(fspec, "gaussian", 1e-6, 100.0), M);
    } else {
      fvec = trig_to_coeffs(cfg::parse_trig(fspec), M);
    }
    io::Csv csv;
    csv.header = {"h", "tail_supnorm"};
    bool pj_ok = true;
    double prev = -1.0;
    json tails = json::array();
    for (const double h : hs) {
      const ProjectorSplit ps =
          spectral_projectors(assemble_transfer(m, h, M, q), c4, fvec);
      csv.rows.push_back({io::fmt_float(h), io::fmt_float(ps.tail_supnorm)});
      tails.push_back(ps.tail_supnorm);
      if (prev >= 0.0) pj_ok = pj_ok && ps.tail_supnorm <= 0.3 * prev;
      prev = ps.tail_supnorm;
    }
    report["projectors"] = {{"model", m.name()}, {"tails", tails}, {"ok", pj_ok}};
    run.ok = run.ok && pj_ok;
    run.files.emplace_back("projectors.csv", io::csv_to_string(csv));
  }

  run.report = report;
  return run;
}

// ---------------------------------------------------------------------------
// orchestration

Run dispatch(const std::string& sub, const json& c, int threads) {
  if (sub == "lie-check") return run_lie_check(c, threads);
  if (sub == "spectrum") return run_spectrum(c, threads);
  if (sub == "gap-scan") return run_gap_scan(c, threads);
  if (sub == "cluster") return run_cluster(c, threads);
  if (sub == "walk-tv") return run_walk_tv(c, threads);
  if (sub == "diffuse") return run_diffuse(c, threads);
  if (sub == "minorize") return run_minorize(c, threads);
  if (sub == "consistency") return run_consistency(c, threads);
  throw std::invalid_argument("unknown subcommand: " + sub);
}

void flush(const std::string& out_dir, const std::string& sub,
           const json& effective, Run& run, double wall_s) {
  io::ensure_dir(out_dir);
  run.report["ok"] = run.ok;
  run.files.emplace_back("report.json", run.report.dump(2) + "\n");

  json artifact_names = json::array();
  for (const auto& f : run.files) artifact_names.push_back(f.first);
  const json manifest{{"subcommand", sub},
                      {"config", effective},
                      {"config_hash", cfg::config_hash(effective)},
                      {"versions",
                       {{"hypowalk", kVersion},
                        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                      std::to_string(EIGEN_MINOR_VERSION)},
                        {"compiler", __VERSION__}}},
                      {"wall_time_s", wall_s},
                      {"ok", run.ok},
                      {"artifacts", artifact_names}};
  for (const auto& f : run.files)
    io::write_file(out_dir + "/" + f.first, f.second);
  io::write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypoelliptic random walk experiments"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> subs{
      {"lie-check", "free nilpotent Lie algebra invariant suite"},
      {"spectrum", "assemble an operator and report its spectrum"},
      {"gap-scan", "spectral gap scaling fit over a list of step sizes"},
      {"cluster", "match rescaled eigenvalues against the generator oracle"},
      {"walk-tv", "Monte Carlo total-variation decay rate"},
      {"diffuse", "diffusion limit: walkers vs matrix powers vs semigroup"},
      {"minorize", "small-ball minorization constant"},
      {"consistency", "generator consistency, Taylor defect and projectors"}};

  std::string config_path, out_flag;
  long long seed_flag = -1;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (const auto& s : subs) {
    CLI::App* sc = app.add_subcommand(s.first, s.second);
    sc->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    sc->add_option("--out", out_flag, "output directory");
    sc->add_option("--seed", seed_flag, "override the config seed");
    sc->add_option("--threads", threads, "worker cap (results are invariant)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  json effective;
  std::string out_dir;
  try {
    json loaded = cfg::load_json(config_path);
    if (loaded.contains("config") && loaded["config"].is_object() &&
        loaded.contains("config_hash")) {
      // manifest: re-run from the embedded config
      const std::string msub = loaded.value("subcommand", sub);
      if (msub != sub)
        throw std::invalid_argument("manifest subcommand '" + msub +
                                    "' does not match '" + sub + "'");
      loaded = loaded["config"];
    }
    if (loaded.contains("subcommand") &&
        loaded["subcommand"].get<std::string>() != sub)
      throw std::invalid_argument("config subcommand '" +
                                  loaded["subcommand"].get<std::string>() +
                                  "' does not match '" + sub + "'");
    if (seed_flag >= 0) loaded["seed"] = seed_flag;

    const char* env_out = std::getenv("HYPOWALK_OUT");
    out_dir = !out_flag.empty() ? out_flag
              : loaded.contains("out") ? loaded["out"].get<std::string>()
              : env_out != nullptr     ? std::string(env_out)
                                       : std::string("out");

    effective = loaded;
    effective.erase("out");
    effective.erase("subcommand");

    const auto t0 = std::chrono::steady_clock::now();
    Run run = dispatch(sub, effective, threads);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    flush(out_dir, sub, effective, run, wall);
    if (!run.ok)
      std::cerr << "hypowalk " << sub << ": a check failed; see " << out_dir
                << "/report.json\n";
    return run.ok ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hypowalk " << sub << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hypowalk " << sub << ": " << e.what() << "\n";
    try {
      Run failed;
      failed.ok = false;
      failed.report = {{"error", e.what()}};
      flush(out_dir.empty() ? "out" : out_dir, sub, effective, failed, 0.0);
    } catch (...) {
    }
    return 1;
  }
}
