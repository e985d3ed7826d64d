#include "hypowalk/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <thread>

#include "hypowalk/kern.hpp"
#include "hypowalk/spectra.hpp"

namespace hypowalk {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_h(double h, const char* who) {
  if (!(h > 0.0) || h > 0.5)
    throw std::invalid_argument(std::string(who) + ": h must lie in (0, 0.5]");
}

kern::WalkFn walk_fn_for(const Model& m, const kern::Kernels& k) {
  const std::string n = m.name();
  if (n == "flat2") return k.walk_flat2;
  if (n == "grushin2") return k.walk_grushin2;
  if (n == "heis_lift") return k.walk_heis2;
  throw std::invalid_argument("no batched kernel for model " + n);
}

// contiguous chunks of the walker range; the kernels key their streams by the
// global walker index, so the split never changes a single draw
void advance_walkers(const Model& m, double* x, double* y, long long N,
                     std::uint64_t seed, std::uint64_t w0, std::uint64_t step0,
                     std::uint64_t nsteps, double h, int threads) {
  if (N <= 0 || nsteps == 0) return;
  const auto& K = kern::select();
  const kern::WalkFn fn = walk_fn_for(m, K);
  long long T = std::clamp<long long>(threads, 1, 64);
  T = std::min(T, N);
  if (T == 1) {
    fn(x, y, static_cast<std::size_t>(N), seed, w0, step0, nsteps, h);
    return;
  }
  const long long chunk = (N + T - 1) / T;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(T));
  for (long long i = 0; i < T; ++i) {
    const long long b = i * chunk;
    const long long e = std::min(N, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, x + b, y + b, static_cast<std::size_t>(e - b), seed,
                      w0 + static_cast<std::uint64_t>(b), step0, nsteps, h);
  }
  for (auto& t : pool) t.join();
}

Histogram bin_positions(const std::vector<double>& x, const std::vector<double>& y,
                        int B) {
  Histogram hist;
  hist.B = B;
  hist.n_walkers = static_cast<long long>(x.size());
  hist.counts.assign(static_cast<std::size_t>(B) * B, 0);
  const double Bd = static_cast<double>(B);
  for (std::size_t i = 0; i < x.size(); ++i) {
    int bx = static_cast<int>(x[i] * Bd);
    int by = static_cast<int>(y[i] * Bd);
    bx = std::clamp(bx, 0, B - 1);
    by = std::clamp(by, 0, B - 1);
    ++hist.counts[static_cast<std::size_t>(bx) * B + by];
  }
  return hist;
}

double trig1(int m, double z) {
  if (m == 0) return 1.0;
  if (m > 0) return std::cos(2.0 * kPi * m * z);
  return std::sin(2.0 * kPi * (-m) * z);
}

double eval_trig(const TrigPoly& f, double x, double y) {
  double s = 0.0;
  for (const auto& term : f) s += term.c * trig1(term.m, x) * trig1(term.n, y);
  return s;
}

// orthonormal basis value phi_k(z)
double phi_val(int k, double z) {
  if (k == 0) return 1.0;
  const double r = std::sqrt(2.0);
  if (k > 0) return r * std::cos(2.0 * kPi * k * z);
  return r * std::sin(2.0 * kPi * (-k) * z);
}

struct LsqFit {
  double slope;
  double intercept;
};

LsqFit lsq(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw std::runtime_error("degenerate least-squares fit");
  return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

}  // namespace

// ---------------------------------------------------------------------------
// single-walker stepping

WalkState make_walk_state(const Model& m, Pt x0, std::uint64_t seed,
                          std::uint64_t walker) {
  return {m.canonicalize(x0), 0, kern::walker_key(seed, walker)};
}

StepDraw peek_draw(const WalkState& st, double h, int p) {
  check_h(h, "peek_draw");
  if (p < 1) throw std::invalid_argument("peek_draw: p must be positive");
  const std::uint64_t v0 = kern::draw_u64(st.key, 2 * st.n);
  const std::uint64_t v1 = kern::draw_u64(st.key, 2 * st.n + 1);
  const int k = 1 + static_cast<int>(kern::bounded(v0, static_cast<std::uint32_t>(p)));
  const double t = std::fma(kern::u01(v1), 2.0 * h, -h);
  return {k, t};
}

WalkState step(const Model& m, double h, const WalkState& st) {
  const StepDraw d = peek_draw(st, h, m.p());
  WalkState out = st;
  out.x = m.flow(d.k, d.t, st.x);
  out.n = st.n + 1;
  return out;
}

Pt step_forced(const Model& m, int k, double t, Pt x) {
  return m.flow(k, t, m.canonicalize(x));
}

// ---------------------------------------------------------------------------
// ensembles and histograms

long long Histogram::total() const {
  long long s = 0;
  for (long long c : counts) s += c;
  return s;
}

EnsembleResult run_ensemble(const Model& m, double h,
                            const std::vector<long long>& checkpoints,
                            long long N_w, Pt x0, std::uint64_t seed, int B,
                            int threads) {
  check_h(h, "run_ensemble");
  if (!m.compact())
    throw std::invalid_argument("run_ensemble: model must be compact");
  if (N_w < 10000)
    throw std::invalid_argument("run_ensemble: N_w must be at least 10^4");
  if (B < 2 || B > 1024)
    throw std::invalid_argument("run_ensemble: B must lie in [2, 1024]");
  if (checkpoints.empty())
    throw std::invalid_argument("run_ensemble: checkpoint list is empty");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 0 ||
        (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
      throw std::invalid_argument(
          "run_ensemble: checkpoints must be nonnegative and strictly increasing");
  }
  const double bytes = 16.0 * static_cast<double>(N_w) +
                       8.0 * static_cast<double>(B) * B *
                           static_cast<double>(checkpoints.size() + 1);
  if (bytes > 1.5e9)
    throw std::length_error(
        "run_ensemble: N_w and B x B x checkpoints exceed the memory budget");

  const Pt c0 = m.canonicalize(x0);
  std::vector<double> xs(static_cast<std::size_t>(N_w), c0[0]);
  std::vector<double> ys(static_cast<std::size_t>(N_w), c0[1]);

  EnsembleResult out;
  out.checkpoints = checkpoints;
  out.hists.reserve(checkpoints.size());
  long long done = 0;
  for (long long target : checkpoints) {
    advance_walkers(m, xs.data(), ys.data(), N_w, seed, 0,
                    static_cast<std::uint64_t>(done),
                    static_cast<std::uint64_t>(target - done), h, threads);
    done = target;
    out.hists.push_back(bin_positions(xs, ys, B));
  }
  return out;
}

double tv_to_uniform(const Histogram& hist) {
  if (hist.B < 1 || hist.n_walkers < 1)
    throw std::invalid_argument("tv_to_uniform: empty histogram");
  const double u = 1.0 / (static_cast<double>(hist.B) * hist.B);
  const double N = static_cast<double>(hist.n_walkers);
  double s = 0.0;
  for (long long c : hist.counts) s += std::abs(static_cast<double>(c) / N - u);
  return 0.5 * s;
}

double tv_stderr(const Histogram& hist) {
  const double N = static_cast<double>(hist.n_walkers);
  double v = 0.0;
  for (long long c : hist.counts) {
    const double p = static_cast<double>(c) / N;
    v += p * (1.0 - p) / N;
  }
  return 0.5 * std::sqrt((1.0 - 2.0 / kPi) * v);
}

double tv_floor(int B, long long N) {
  return 0.5 * B * std::sqrt(2.0 / (kPi * static_cast<double>(N)));
}

// ---------------------------------------------------------------------------
// TV decay rate

TvDecayReport tv_decay_rate(const Model& m, double h, long long N_w,
                            std::uint64_t seed, int B, long long max_n,
                            long long stride, int M, int q, int threads) {
  if (stride < 1 || max_n < stride)
    throw std::invalid_argument("tv_decay_rate: need max_n >= stride >= 1");
  std::vector<long long> cps;
  for (long long n = 0; n <= max_n; n += stride) cps.push_back(n);
  const EnsembleResult ens = run_ensemble(m, h, cps, N_w, {0.0, 0.0}, seed, B,
                                          threads);

  TvDecayReport rep;
  rep.ns = cps;
  rep.floor = tv_floor(B, N_w);
  for (const Histogram& hist : ens.hists) {
    const double tv = tv_to_uniform(hist);
    rep.tv.push_back(tv);
    rep.stderrs.push_back(tv_stderr(hist));
    rep.tv_corr.push_back(
        std::sqrt(std::max(tv * tv - rep.floor * rep.floor, 0.0)));
  }

  // fit window: sampled TV between twice the floor and 0.3, on the corrected
  // values (quadrature removal of the sampling floor)
  std::vector<double> fx, fy;
  std::size_t lo = rep.tv.size(), hi = 0;
  for (std::size_t i = 0; i < rep.tv.size(); ++i) {
    if (rep.tv[i] >= 2.0 * rep.floor && rep.tv[i] <= 0.3) {
      fx.push_back(static_cast<double>(rep.ns[i]));
      fy.push_back(std::log(rep.tv_corr[i]));
      lo = std::min(lo, i);
      hi = std::max(hi, i + 1);
    }
  }
  if (fx.size() < 2)
    throw std::runtime_error(
        "tv_decay_rate: fewer than two checkpoints with TV in [2*floor, 0.3] "
        "(floor = " + std::to_string(rep.floor) +
        "); extend max_n or refine the stride");
  rep.fit_begin = lo;
  rep.fit_end = hi;
  rep.rate = -lsq(fx, fy).slope;

  const GalerkinOperator op = assemble_transfer(m, h, M, q);
  rep.gap = spectral_gap(eigen_decompose(op));
  rep.ratio = rep.rate / rep.gap;

  for (std::size_t i = 0; i + 1 < rep.tv.size(); ++i) {
    const double sig = std::hypot(rep.stderrs[i], rep.stderrs[i + 1]);
    if (rep.tv[i + 1] > rep.tv[i] + 3.0 * sig) ++rep.envelope_violations;
  }
  return rep;
}

MatrixSlopeReport tv_matrix_slope(const Model& m, double h, Pt x0, int M,
                                  int q, int G, long long n_lo, long long n_hi,
                                  long long stride) {
  if (n_lo < 1 || n_hi <= n_lo || stride < 1)
    throw std::invalid_argument("tv_matrix_slope: need 1 <= n_lo < n_hi, stride >= 1");
  if (G < 2 * M + 2)
    throw std::invalid_argument("tv_matrix_slope: grid G must exceed 2M+1");
  const GalerkinOperator op = assemble_transfer(m, h, M, q);
  const FourierBasis fb(M);
  const Pt c0 = m.canonicalize(x0);

  // coefficients of the delta mass at x0: <delta_x0, phi_m phi_n>
  Eigen::VectorXd c = Eigen::VectorXd::Zero(fb.dim());
  for (int n = -M; n <= M; ++n)
    for (int mm = -M; mm <= M; ++mm)
      c[fb.idx(mm, n)] = phi_val(mm, c0[0]) * phi_val(n, c0[1]);

  MatrixSlopeReport rep;
  c = apply_power(op, n_lo, c);
  long long n = n_lo;
  while (true) {
    const Eigen::MatrixXd vals = eval_on_grid(c, M, G);
    double s = 0.0;
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j) s += std::abs(vals(i, j) - 1.0);
    rep.ns.push_back(n);
    rep.tv.push_back(0.5 * s / (static_cast<double>(G) * G));
    if (n + stride > n_hi) break;
    c = apply_power(op, stride, std::move(c));
    n += stride;
  }
  if (rep.ns.size() < 2)
    throw std::runtime_error("tv_matrix_slope: fewer than two checkpoints in range");

  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < rep.ns.size(); ++i) {
    if (rep.tv[i] <= 0.0)
      throw std::runtime_error("tv_matrix_slope: TV underflowed to zero; lower n_hi");
    fx.push_back(static_cast<double>(rep.ns[i]));
    fy.push_back(std::log(rep.tv[i]));
  }
  rep.slope = lsq(fx, fy).slope;
  rep.expected = std::log1p(-spectral_gap(eigen_decompose(op)));
  return rep;
}

// ---------------------------------------------------------------------------
// diffusion limit

DiffusionReport diffusion_limit_test(const Model& m, double h, double t,
                                     const TrigPoly& f, Pt x0, long long N_w,
                                     std::uint64_t seed, int M, int q,
                                     int threads) {
  check_h(h, "diffusion_limit_test");
  if (!(t > 0.0)) throw std::invalid_argument("diffusion_limit_test: t must be positive");
  if (N_w < 10000)
    throw std::invalid_argument("diffusion_limit_test: N_w must be at least 10^4");
  DiffusionReport rep;
  // greatest n with h^2 n <= t; the epsilon absorbs roundoff when t/h^2 is
  // intended to be an integer
  rep.n = static_cast<long long>(std::floor(t / (h * h) + 1e-9));
  if (rep.n > 2000000)
    throw std::invalid_argument("diffusion_limit_test: t / h^2 is too large");

  const Pt c0 = m.canonicalize(x0);
  std::vector<double> xs(static_cast<std::size_t>(N_w), c0[0]);
  std::vector<double> ys(static_cast<std::size_t>(N_w), c0[1]);
  advance_walkers(m, xs.data(), ys.data(), N_w, seed, 0, 0,
                  static_cast<std::uint64_t>(rep.n), h, threads);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = eval_trig(f, xs[i], ys[i]);
    sum += v;
    sumsq += v * v;
  }
  const double N = static_cast<double>(N_w);
  rep.mc_mean = sum / N;
  const double var = std::max(sumsq / N - rep.mc_mean * rep.mc_mean, 0.0);
  rep.mc_stderr = std::sqrt(var / N);

  const Eigen::VectorXd cf = trig_to_coeffs(f, M);
  const GalerkinOperator op = assemble_transfer(m, h, M, q);
  const Eigen::VectorXd cn = apply_power(op, rep.n, cf);
  rep.matrix_value = eval_coeffs(cn, M, c0[0], c0[1]);

  const GalerkinOperator gen = assemble_generator(m, M);
  const EigenDecomp ed = eigen_decompose(gen);
  const int np = op.nper();
  Eigen::VectorXd cs(cf.size());
  for (int b = 0; b < np; ++b) {
    const Eigen::VectorXd slice = cf.segment(static_cast<Eigen::Index>(b) * np, np);
    Eigen::VectorXd a = ed.vectors[static_cast<std::size_t>(b)].transpose() * slice;
    for (int i = 0; i < np; ++i)
      a[i] *= std::exp(-t * ed.values[static_cast<std::size_t>(b)][i]);
    cs.segment(static_cast<Eigen::Index>(b) * np, np) =
        ed.vectors[static_cast<std::size_t>(b)] * a;
  }
  rep.semigroup_value = eval_coeffs(cs, M, c0[0], c0[1]);

  rep.z = rep.mc_stderr > 0.0
              ? (rep.mc_mean - rep.matrix_value) / rep.mc_stderr
              : (rep.mc_mean == rep.matrix_value ? 0.0
                                                 : std::numeric_limits<double>::infinity());
  return rep;
}

// ---------------------------------------------------------------------------
// continuous-time paths

Pt PathSample::at(const Model& m, double T) const {
  const double h2 = h * h;
  const double T_max = static_cast<double>(slots.size()) * h2;
  if (!(T >= -1e-12) || T > T_max * (1.0 + 1e-12) + 1e-12)
    throw std::invalid_argument("PathSample::at: time outside [0, T_final]");
  T = std::clamp(T, 0.0, T_max);
  std::size_t j = std::min(slots.size() - 1,
                           static_cast<std::size_t>(T / h2));
  double frac = std::clamp(T / h2 - static_cast<double>(j), 0.0, 1.0);
  const PathSlot& s = slots[j];
  return m.flow(s.k, s.t_draw * frac, s.x_begin);
}

PathSample path_from_draws(const Model& m, double h,
                           const std::vector<StepDraw>& draws, Pt x0) {
  check_h(h, "path_from_draws");
  if (draws.empty()) throw std::invalid_argument("path_from_draws: no draws");
  PathSample path;
  path.h = h;
  path.x0 = m.canonicalize(x0);
  Pt x = path.x0;
  path.slots.reserve(draws.size());
  for (const StepDraw& d : draws) {
    if (d.k < 1 || d.k > m.p() || std::abs(d.t) > h)
      throw std::invalid_argument("path_from_draws: draw outside the step law");
    path.slots.push_back({d.k, d.t, x});
    x = m.flow(d.k, d.t, x);
  }
  path.x_end = x;
  return path;
}

PathSample path_sample(const Model& m, double h, double T_final, Pt x0,
                       std::uint64_t seed, std::uint64_t walker) {
  check_h(h, "path_sample");
  if (!(T_final > 0.0))
    throw std::invalid_argument("path_sample: T_final must be positive");
  const double h2 = h * h;
  const double raw = T_final / h2;
  const long long J = std::max<long long>(1, static_cast<long long>(std::ceil(raw - 1e-12)));
  if (J > 10000000) throw std::invalid_argument("path_sample: T_final / h^2 too large");

  WalkState st = make_walk_state(m, x0, seed, walker);
  std::vector<StepDraw> draws;
  draws.reserve(static_cast<std::size_t>(J));
  for (long long j = 0; j < J; ++j) {
    draws.push_back(peek_draw(st, h, m.p()));
    st = step(m, h, st);
  }
  return path_from_draws(m, h, draws, x0);
}

// ---------------------------------------------------------------------------
// minorization

namespace {

// exp(lambda(u)) x0 in the model chart: exact for the flat torus (commuting
// fields) and for the Heisenberg lift (closed-form group flow)
Pt exp_lambda(const Model& m, const std::vector<double>& u, Pt x0) {
  const std::string name = m.name();
  if (name == "flat2") {
    return m.flow(2, u[1], m.flow(1, u[0], x0));
  }
  if (name == "heis_lift") {
    return lift_flow({u[0], u[1], u[2]}, x0);
  }
  throw std::invalid_argument(
      "minorization_ratio: exp(lambda(u)) has a closed form only for flat2 and "
      "heis_lift (compare grushin2 through its lift)");
}

// displacement from x0 in the chart; torus models unwrap to (-1/2, 1/2]
std::array<double, 2> displacement(const Model& m, Pt pos, Pt x0) {
  std::array<double, 2> d{pos[0] - x0[0], pos[1] - x0[1]};
  if (m.compact())
    for (double& v : d) v -= std::floor(v + 0.5);
  return d;
}

}  // namespace

MinorizationReport minorization_ratio(const Model& m, const LieStructure& L,
                                      double h, double eps, Pt x0,
                                      long long N_s, int B, std::uint64_t seed,
                                      int threads) {
  check_h(h, "minorization_ratio");
  if (!(eps > 0.0))
    throw std::invalid_argument("minorization_ratio: eps must be positive");
  if (N_s < 10000)
    throw std::invalid_argument("minorization_ratio: N_s must be at least 10^4");
  if (B < 2 || B > 512)
    throw std::invalid_argument("minorization_ratio: B must lie in [2, 512]");
  if (L.p() != m.p() || L.r() != m.step_r())
    throw std::invalid_argument(
        "minorization_ratio: Lie structure does not match the model's (p, r)");

  const WalkConstants wc = L.walk_constants();
  const int D = wc.D;
  const Pt c0 = m.canonicalize(x0);

  MinorizationReport rep;
  rep.support_violation = eps > 1.0;
  rep.s_mass_expected = std::pow(2.0 * eps, D);

  // box samples and their chart positions (counter stream separate from the
  // chain's walker streams)
  const std::uint64_t seed_s = kern::mix13(seed ^ 0x53616d706c65426fULL);
  std::vector<std::array<double, 2>> s_disp(static_cast<std::size_t>(N_s));
  for (long long i = 0; i < N_s; ++i) {
    const std::uint64_t key = kern::walker_key(seed_s, static_cast<std::uint64_t>(i));
    std::uint64_t ctr = 0;
    const auto rng = [&]() { return kern::u01(kern::draw_u64(key, ctr++)); };
    const std::vector<double> u = L.sample_box(eps, h, rng);
    s_disp[static_cast<std::size_t>(i)] = displacement(m, exp_lambda(m, u, c0), c0);
  }

  std::array<double, 2> lo = s_disp[0], hi = s_disp[0];
  for (const auto& d : s_disp)
    for (int a = 0; a < 2; ++a) {
      lo[a] = std::min(lo[a], d[a]);
      hi[a] = std::max(hi[a], d[a]);
    }
  rep.window_lo = lo;
  rep.window_hi = hi;
  const std::array<double, 2> width{hi[0] - lo[0], hi[1] - lo[1]};
  if (!(width[0] > 0.0) || !(width[1] > 0.0))
    throw std::runtime_error("minorization_ratio: degenerate sample window");

  const auto bin_of = [&](const std::array<double, 2>& d, long long& out) {
    for (int a = 0; a < 2; ++a)
      if (d[a] < lo[a] || d[a] > hi[a]) return false;
    const int bx = std::clamp(static_cast<int>((d[0] - lo[0]) / width[0] * B), 0, B - 1);
    const int by = std::clamp(static_cast<int>((d[1] - lo[1]) / width[1] * B), 0, B - 1);
    out = static_cast<long long>(bx) * B + by;
    return true;
  };

  std::vector<long long> H_S(static_cast<std::size_t>(B) * B, 0);
  for (const auto& d : s_disp) {
    long long b;
    if (bin_of(d, b)) ++H_S[static_cast<std::size_t>(b)];
  }

  // P steps of the chain per sample, batched through the walk kernels
  std::vector<double> xs(static_cast<std::size_t>(N_s), c0[0]);
  std::vector<double> ys(static_cast<std::size_t>(N_s), c0[1]);
  advance_walkers(m, xs.data(), ys.data(), N_s, seed, 0, 0,
                  static_cast<std::uint64_t>(wc.P), h, threads);
  std::vector<long long> H_T(static_cast<std::size_t>(B) * B, 0);
  for (long long i = 0; i < N_s; ++i) {
    const auto d = displacement(m, {xs[static_cast<std::size_t>(i)],
                                    ys[static_cast<std::size_t>(i)]}, c0);
    long long b;
    if (bin_of(d, b))
      ++H_T[static_cast<std::size_t>(b)];
    else
      ++rep.t_outside;
  }

  // density ratio over bins the box law populates reliably
  const double mass = rep.s_mass_expected;
  double c_min = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < H_S.size(); ++b) {
    if (H_S[b] < 50) {
      ++rep.excluded_bins;
      continue;
    }
    ++rep.admitted_bins;
    c_min = std::min(c_min, static_cast<double>(H_T[b]) /
                                (mass * static_cast<double>(H_S[b])));
  }
  if (rep.admitted_bins == 0)
    throw std::runtime_error(
        "minorization_ratio: no bin holds 50 box samples; lower B or raise N_s");
  rep.c_hat = c_min;

  // independent mass estimate of S^eps_h; binomial error bar
  const std::uint64_t seed_v = kern::mix13(seed ^ 0x566f6c756d654d63ULL);
  const long long n_vol = std::min<long long>(N_s, 1000000);
  {
    const std::uint64_t key = kern::walker_key(seed_v, 0);
    std::uint64_t ctr = 0;
    const auto rng = [&]() { return kern::u01(kern::draw_u64(key, ctr++)); };
    rep.s_mass = L.box_volume_mc(eps, h, n_vol, rng);
  }
  const double ref = std::pow(2.0 * std::max(1.0, eps), D);
  const double frac = rep.s_mass / ref;
  rep.s_mass_sigma =
      ref * std::sqrt(std::max(frac * (1.0 - frac), 0.0) / static_cast<double>(n_vol));
  return rep;
}

// ---------------------------------------------------------------------------
// utilities

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace hypowalk
