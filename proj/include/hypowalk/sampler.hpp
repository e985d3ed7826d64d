#pragma once

// Monte Carlo side of the walk: single-step API, threaded ensembles with
// checkpointed histograms, total-variation decay fits, the diffusion-limit
// comparison against the Galerkin operators, continuous-time path samples and
// the small-ball minorization estimate.  Randomness is counter-based
// throughout (kern::draw_u64), so every routine is bit-identical across
// worker counts and chunk decompositions.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hypowalk/galerkin.hpp"
#include "hypowalk/lie.hpp"
#include "hypowalk/models.hpp"

namespace hypowalk {

// ---------------------------------------------------------------------------
// single-walker stepping

struct WalkState {
  Pt x;                  // current position (canonical chart)
  std::uint64_t n;       // steps taken so far
  std::uint64_t key;     // per-walker stream key (kern::walker_key)
};

WalkState make_walk_state(const Model& m, Pt x0, std::uint64_t seed,
                          std::uint64_t walker);

struct StepDraw {
  int k;     // field index, 1-based
  double t;  // flow time in [-h, h)
};

// the draw consumed by step number `n` of a stream; pure in (key, n)
StepDraw peek_draw(const WalkState& st, double h, int p);

// one step of the walk: draw (k, t), apply the exact flow, advance the
// counter.  Bit-identical to the batched kernels for every model.
WalkState step(const Model& m, double h, const WalkState& st);

// one step with a forced draw (no randomness consumed)
Pt step_forced(const Model& m, int k, double t, Pt x);

// ---------------------------------------------------------------------------
// ensembles and histograms

struct Histogram {
  int B = 0;                      // bins per axis on [0,1)^2
  long long n_walkers = 0;
  std::vector<long long> counts;  // row-major, bin (i,j) at i*B + j

  long long total() const;
};

struct EnsembleResult {
  std::vector<long long> checkpoints;
  std::vector<Histogram> hists;  // one per checkpoint, same order
};

// N_w walkers from x0 advanced to each checkpoint step count (sorted,
// distinct, >= 0); histograms use the B x B uniform grid on the torus.
// Compact models only.  `threads` splits the walker range into contiguous
// chunks; results do not depend on it.
EnsembleResult run_ensemble(const Model& m, double h,
                            const std::vector<long long>& checkpoints,
                            long long N_w, Pt x0, std::uint64_t seed, int B,
                            int threads);

// total variation distance between the empirical bin law and uniform
double tv_to_uniform(const Histogram& hist);

// delta-method standard error of tv_to_uniform under multinomial sampling
double tv_stderr(const Histogram& hist);

// sampling floor: the expected TV of a perfectly uniform sample,
// (B/2) sqrt(2 / (pi N)); reported and subtracted in fits, never asserted
double tv_floor(int B, long long N);

// ---------------------------------------------------------------------------
// TV decay rate

struct TvDecayReport {
  std::vector<long long> ns;      // checkpoint steps
  std::vector<double> tv;         // empirical TV at each checkpoint
  std::vector<double> stderrs;
  std::vector<double> tv_corr;    // sqrt(max(tv^2 - floor^2, 0))
  double floor = 0.0;
  std::size_t fit_begin = 0, fit_end = 0;  // half-open index range of the fit
  double rate = 0.0;              // -d log tv_corr / dn over the window
  double gap = 0.0;               // spectral gap g(h) of the Galerkin T_h
  double ratio = 0.0;             // rate / gap
  int envelope_violations = 0;    // checkpoints with tv[i+1] > tv[i] + 3 sigma
};

// fits log(tv_corr) over the window of checkpoints with tv in
// [2*floor, 0.3]; throws if the window holds fewer than two points
TvDecayReport tv_decay_rate(const Model& m, double h, long long N_w,
                            std::uint64_t seed, int B, long long max_n,
                            long long stride, int M, int q, int threads);

struct MatrixSlopeReport {
  std::vector<long long> ns;
  std::vector<double> tv;       // grid TV of the T_h^n delta density
  double slope = 0.0;           // d log tv / dn over the given range
  double expected = 0.0;        // log(1 - g(h))
};

// deterministic cross-check: evolve the delta mass at x0 by coefficient
// powers of T_h and fit the grid-TV slope over steps [n_lo, n_hi]
MatrixSlopeReport tv_matrix_slope(const Model& m, double h, Pt x0, int M,
                                  int q, int G, long long n_lo, long long n_hi,
                                  long long stride);

// ---------------------------------------------------------------------------
// diffusion limit

struct DiffusionReport {
  long long n = 0;          // floor(t / h^2), the step count matched to time t
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  double matrix_value = 0.0;     // T_h^n f (x0) via coefficient powers
  double semigroup_value = 0.0;  // e^{-tL} f (x0) via the generator spectrum
  double z = 0.0;                // (mc_mean - matrix_value) / mc_stderr
};

DiffusionReport diffusion_limit_test(const Model& m, double h, double t,
                                     const TrigPoly& f, Pt x0, long long N_w,
                                     std::uint64_t seed, int M, int q,
                                     int threads);

// ---------------------------------------------------------------------------
// continuous-time paths

struct PathSlot {
  int k;          // field of this slot, 1-based
  double t_draw;  // drawn flow time in [-h, h)
  Pt x_begin;     // position at the slot's left endpoint
};

struct PathSample {
  double h = 0.0;
  Pt x0{};
  std::vector<PathSlot> slots;
  Pt x_end{};

  // position at time T in [0, slots.size() * h^2]: within slot j the flow
  // time interpolates linearly from 0 to t_draw over a duration h^2
  Pt at(const Model& m, double T) const;
};

// path over [0, T_final] with the walker's counter stream; slot endpoints
// reproduce the discrete chain bit for bit
PathSample path_sample(const Model& m, double h, double T_final, Pt x0,
                       std::uint64_t seed, std::uint64_t walker);

// path built from forced draws (draws[j].t must lie in [-h, h])
PathSample path_from_draws(const Model& m, double h,
                           const std::vector<StepDraw>& draws, Pt x0);

// ---------------------------------------------------------------------------
// minorization

struct MinorizationReport {
  double c_hat = 0.0;       // min over admitted bins of H_T / ((2 eps)^D H_S)
  double s_mass = 0.0;      // MC estimate of the S^eps_h mass, target (2eps)^D
  double s_mass_sigma = 0.0;
  double s_mass_expected = 0.0;  // (2 eps)^D
  long long excluded_bins = 0;   // window bins with S count below the floor
  long long admitted_bins = 0;
  long long t_outside = 0;       // chain endpoints falling outside the window
  bool support_violation = false;  // eps > 1: box leaves the unit dilation range
  std::array<double, 2> window_lo{}, window_hi{};  // displacement window
};

// compares the P-step chain law started at x0 against the pushforward of the
// uniform law on the dilated box I_{eps,h} under u -> exp(lambda(u)) x0,
// both binned on the B x B window spanned by the box samples; P, D, Q come
// from L.walk_constants().  Flat and Heisenberg-lift models only.
MinorizationReport minorization_ratio(const Model& m, const LieStructure& L,
                                      double h, double eps, Pt x0,
                                      long long N_s, int B, std::uint64_t seed,
                                      int threads);

// ---------------------------------------------------------------------------
// small utilities shared by the tests and the CLI

// two-sample Kolmogorov-Smirnov statistic (copies and sorts its inputs)
double ks_statistic(std::vector<double> a, std::vector<double> b);

}  // namespace hypowalk
