#include "hypowalk/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hypowalk {

double spectral_gap(const EigenDecomp& d) {
  if (d.kind != OpKind::transfer)
    throw std::invalid_argument("spectral_gap: expects a transfer decomposition");
  if (d.order.size() < 2) throw std::invalid_argument("spectral_gap: spectrum too small");
  if (std::abs(d.order[0].value - 1.0) > 1e-10)
    throw std::runtime_error("spectral_gap: top eigenvalue is not 1");
  if (d.order[1].value > 1.0 - 1e-10)
    throw std::runtime_error("spectral_gap: top eigenvalue is degenerate");
  return 1.0 - d.order[1].value;
}

std::vector<double> rescaled_low_spectrum(const EigenDecomp& d, double R) {
  if (d.kind != OpKind::transfer)
    throw std::invalid_argument("rescaled_low_spectrum: expects a transfer decomposition");
  if (!(R > 0.0)) throw std::invalid_argument("rescaled_low_spectrum: R must be > 0");
  if (R > 0.25 / (d.h * d.h))
    throw std::invalid_argument(
        "rescaled_low_spectrum: R exceeds the trustable window 0.25/h^2");
  std::vector<double> out;
  const double h2 = d.h * d.h;
  // order is descending in eigenvalue, so rescaled values come out ascending
  for (const auto& p : d.order) {
    const double r = (1.0 - p.value) / h2;
    if (r <= 1e-9) continue;  // the simple top eigenvalue
    if (r > R) break;
    out.push_back(r);
  }
  return out;
}

std::vector<OracleCluster> group_eigenvalues(std::vector<double> vals, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("group_eigenvalues: tol must be > 0");
  std::sort(vals.begin(), vals.end());
  std::vector<OracleCluster> out;
  size_t i = 0;
  while (i < vals.size()) {
    size_t j = i + 1;
    while (j < vals.size() && vals[j] - vals[j - 1] <= tol) ++j;
    double mean = 0.0;
    for (size_t k = i; k < j; ++k) mean += vals[k];
    out.push_back({mean / double(j - i), int(j - i)});
    i = j;
  }
  return out;
}

std::vector<OracleCluster> generator_cluster_oracle(const Model& m, int M, double R,
                                                    double group_tol) {
  const auto d = eigen_decompose(assemble_generator(m, M));
  std::vector<double> vals;
  for (const auto& p : d.order) {
    if (p.value <= 1e-9) continue;  // the zero mode (constants)
    if (p.value > R) break;
    vals.push_back(p.value);
  }
  return group_eigenvalues(std::move(vals), group_tol);
}

ClusterReport cluster_match(const std::vector<double>& rescaled,
                            const std::vector<OracleCluster>& oracle, double eps,
                            double R) {
  if (!(eps > 0.0)) throw std::invalid_argument("cluster_match: eps must be > 0");
  if (oracle.empty()) throw std::invalid_argument("cluster_match: empty oracle");
  ClusterReport rep;
  rep.max_drift = 0.0;
  for (const auto& o : oracle) rep.clusters.push_back({o.nu, o.multiplicity, 0, {}});

  double min_gap = std::numeric_limits<double>::infinity();
  for (size_t j = 1; j < oracle.size(); ++j)
    min_gap = std::min(min_gap, oracle[j].nu - oracle[j - 1].nu);
  rep.intervals_overlap = 2.0 * eps >= min_gap;

  for (double v : rescaled) {
    size_t best = 0;
    double bd = std::abs(v - oracle[0].nu);
    for (size_t j = 1; j < oracle.size(); ++j) {
      const double dj = std::abs(v - oracle[j].nu);
      if (dj < bd) {  // ties go to the smaller center
        bd = dj;
        best = j;
      }
    }
    if (bd <= eps) {
      rep.clusters[best].m_found += 1;
      rep.clusters[best].members.push_back(v);
      rep.max_drift = std::max(rep.max_drift, bd);
    } else {
      rep.unmatched.push_back(v);
    }
  }

  rep.ok = rep.unmatched.empty();
  for (const auto& c : rep.clusters)
    if (c.nu + eps <= R && c.m_found != c.m_expected) rep.ok = false;
  return rep;
}

GapScalingFit gap_scaling_fit(const Model& m, const std::vector<double>& hs, int M,
                              int q) {
  if (hs.size() < 2)
    throw std::invalid_argument("gap_scaling_fit: need at least two step sizes");
  for (size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0)) throw std::invalid_argument("gap_scaling_fit: h must be > 0");
    if (i > 0 && std::abs(hs[i] - 0.5 * hs[i - 1]) > 1e-12 * hs[i - 1])
      throw std::invalid_argument("gap_scaling_fit: step sizes must be dyadic");
  }
  GapScalingFit fit;
  fit.hs = hs;
  for (double h : hs) {
    const double g = spectral_gap(eigen_decompose(assemble_transfer(m, h, M, q)));
    fit.gaps.push_back(g);
    fit.gap_over_h2.push_back(g / (h * h));
  }
  const size_t k = hs.size() - 1;
  fit.nu_hat = (4.0 * fit.gap_over_h2[k] - fit.gap_over_h2[k - 1]) / 3.0;
  fit.order = std::numeric_limits<double>::quiet_NaN();
  if (hs.size() >= 3) {
    const double d1 = std::abs(fit.gap_over_h2[k - 1] - fit.gap_over_h2[k - 2]);
    const double d2 = std::abs(fit.gap_over_h2[k] - fit.gap_over_h2[k - 1]);
    if (d2 > 0.0) fit.order = std::log2(d1 / d2);
  }
  fit.band_lo = 0.5 * fit.nu_hat;
  fit.band_hi = 1.5 * fit.nu_hat;
  fit.in_band = true;
  for (double v : fit.gap_over_h2)
    if (v < fit.band_lo || v > fit.band_hi) fit.in_band = false;
  fit.monotone = true;  // gap should shrink along the decreasing hs
  for (size_t i = 1; i < fit.gaps.size(); ++i)
    if (!(fit.gaps[i] < fit.gaps[i - 1])) fit.monotone = false;
  return fit;
}

std::vector<WeylPoint> weyl_count(const std::vector<double>& rescaled,
                                  const std::vector<double>& lambdas) {
  std::vector<WeylPoint> out;
  for (double l : lambdas) {
    long long c = 0;
    for (double v : rescaled)
      if (v <= l) ++c;
    out.push_back({l, c});
  }
  return out;
}

std::pair<double, double> dirichlet_forms(const GalerkinOperator& T,
                                          const GalerkinOperator& L,
                                          const Eigen::VectorXd& u) {
  if (T.kind != OpKind::transfer || L.kind != OpKind::generator)
    throw std::invalid_argument("dirichlet_forms: expects (transfer, generator)");
  if (u.size() != T.dim() || u.size() != L.dim())
    throw std::invalid_argument("dirichlet_forms: size mismatch");
  const double eh = (u - apply_op(T, u)).dot(u) / (T.h * T.h);
  const double el = apply_op(L, u).dot(u);
  return {eh, el};
}

ConsistencyReport generator_consistency(const Model& m, const TrigPoly& f,
                                        const std::vector<double>& hs, int M, int q) {
  if (hs.empty()) throw std::invalid_argument("generator_consistency: empty hs");
  ConsistencyReport rep;
  rep.hs = hs;
  const auto L = assemble_generator(m, M);
  const Eigen::VectorXd cf = trig_to_coeffs(f, M);
  const Eigen::VectorXd Lf = apply_op(L, cf);
  const int G = 4 * (2 * M + 1);
  for (double h : hs) {
    const auto T = assemble_transfer(m, h, M, q);
    const Eigen::VectorXd d = (cf - apply_op(T, cf)) / (h * h) - Lf;
    rep.errors.push_back(eval_on_grid(d, M, G).cwiseAbs().maxCoeff());
  }
  for (size_t i = 0; i + 1 < rep.errors.size(); ++i)
    rep.ratios.push_back(rep.errors[i] / rep.errors[i + 1]);
  return rep;
}

ProjectorSplit spectral_projectors(const GalerkinOperator& T, double c4,
                                   const Eigen::VectorXd& f) {
  if (T.kind != OpKind::transfer)
    throw std::invalid_argument("spectral_projectors: expects a transfer operator");
  if (!(c4 > 0.0 && c4 < 1.0))
    throw std::invalid_argument("spectral_projectors: c4 must lie in (0, 1)");
  if (f.size() != T.dim()) throw std::invalid_argument("spectral_projectors: size mismatch");
  const auto d = eigen_decompose(T);
  const int np = T.nper();
  const double thr = 1.0 - c4;
  ProjectorSplit out;
  out.low = Eigen::VectorXd::Zero(f.size());
  out.low_count = 0;
  for (int n = -T.M; n <= T.M; ++n) {
    const auto& V = d.vectors[size_t(n + T.M)];
    const auto& ev = d.values[size_t(n + T.M)];
    Eigen::VectorXd a = V.transpose() * f.segment((n + T.M) * np, np);
    for (int i = 0; i < np; ++i) {
      if (ev[i] >= thr)
        ++out.low_count;
      else
        a[i] = 0.0;
    }
    out.low.segment((n + T.M) * np, np) = V * a;
  }
  out.tail = f - out.low;
  out.tail_supnorm = eval_on_grid(out.tail, T.M, 4 * np).cwiseAbs().maxCoeff();
  return out;
}

SupnormScan eigenfunction_supnorm_scan(const GalerkinOperator& T, double R) {
  if (T.kind != OpKind::transfer)
    throw std::invalid_argument("eigenfunction_supnorm_scan: expects a transfer operator");
  const auto d = eigen_decompose(T);
  const int np = T.nper();
  const double h2 = T.h * T.h;
  SupnormScan scan;
  scan.max_supnorm = 0.0;
  FourierBasis b(T.M);
  for (const auto& p : d.order) {
    const double r = (1.0 - p.value) / h2;
    if (r < -1e-9) continue;
    if (r > R) break;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(b.dim());
    c.segment((p.block_n + T.M) * np, np) =
        d.vectors[size_t(p.block_n + T.M)].col(p.index_in_block);
    const double sup = eval_on_grid(c, T.M, 4 * np).cwiseAbs().maxCoeff();
    scan.entries.push_back({r, sup, p.block_n});
    scan.max_supnorm = std::max(scan.max_supnorm, sup);
  }
  // least-squares slope of log(sup) on log(1 + rescaled)
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& e : scan.entries) {
    const double x = std::log(1.0 + std::max(e.rescaled, 0.0));
    const double y = std::log(e.supnorm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(scan.entries.size());
  const double den = n * sxx - sx * sx;
  scan.fit_exponent = den > 1e-12 ? (n * sxy - sx * sy) / den
                                  : std::numeric_limits<double>::quiet_NaN();
  return scan;
}

ChapmanReport chapman_taylor_check(const GalerkinOperator& T, const Eigen::VectorXd& f,
                                   const std::vector<double>& deltas) {
  if (T.kind != OpKind::transfer)
    throw std::invalid_argument("chapman_taylor_check: expects a transfer operator");
  if (deltas.empty()) throw std::invalid_argument("chapman_taylor_check: empty deltas");
  if (f.size() != T.dim()) throw std::invalid_argument("chapman_taylor_check: size mismatch");
  const double h2 = T.h * T.h;
  std::vector<long long> nmax;
  long long ntop = 0;
  for (double dl : deltas) {
    const long long n = (long long)std::floor(dl / h2 + 1e-9);
    if (n < 1)
      throw std::invalid_argument("chapman_taylor_check: delta smaller than one step");
    nmax.push_back(n);
    ntop = std::max(ntop, n);
  }
  ChapmanReport rep;
  rep.deltas = deltas;
  rep.defect.assign(deltas.size(), 0.0);
  const Eigen::VectorXd g1 = f - apply_op(T, f);
  Eigen::VectorXd c = f;
  const int G = 4 * T.nper();
  for (long long n = 1; n <= ntop; ++n) {
    c = apply_op(T, c);
    const Eigen::VectorXd defect = c - f + double(n) * g1;
    const double s = eval_on_grid(defect, T.M, G).cwiseAbs().maxCoeff();
    for (size_t j = 0; j < deltas.size(); ++j)
      if (n <= nmax[j]) rep.defect[j] = std::max(rep.defect[j], s);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (size_t j = 0; j < deltas.size(); ++j) {
    rep.ratio.push_back(rep.defect[j] / (deltas[j] * deltas[j]));
    lo = std::min(lo, rep.ratio.back());
    hi = std::max(hi, rep.ratio.back());
  }
  rep.variation = hi / lo;
  return rep;
}

}  // namespace hypowalk
