#pragma once

// Spectral-theory verification layer on top of the Galerkin operators: gap
// extraction, rescaled low spectrum against the generator oracle, cluster
// multiplicity matching, Weyl counts, Dirichlet forms, spectral projectors,
// generator-limit and Chapman-Taylor defect checks.

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "hypowalk/galerkin.hpp"

namespace hypowalk {

// distance from the simple top eigenvalue 1 to the rest of the spectrum;
// throws if the decomposition is not a transfer one, the top eigenvalue is
// missing, or it is degenerate
double spectral_gap(const EigenDecomp& d);

// rescaled eigenvalues (1 - eig) / h^2 in (0, R], ascending; refuses R beyond
// the trustable window R <= 0.25 / h^2
std::vector<double> rescaled_low_spectrum(const EigenDecomp& d, double R);

struct OracleCluster {
  double nu;         // cluster center (mean of grouped eigenvalues)
  int multiplicity;  // number of grouped eigenvalues
};

// chain-group sorted eigenvalues: a new cluster starts when the gap to the
// previous value exceeds tol
std::vector<OracleCluster> group_eigenvalues(std::vector<double> vals, double tol);

// nonzero generator eigenvalues <= R, grouped at scale group_tol
std::vector<OracleCluster> generator_cluster_oracle(const Model& m, int M, double R,
                                                    double group_tol);

struct Cluster {
  double nu;
  int m_expected;
  int m_found;
  std::vector<double> members;
};

struct ClusterReport {
  std::vector<Cluster> clusters;
  std::vector<double> unmatched;  // rescaled values farther than eps from every center
  double max_drift;               // max |member - nu| over matched values
  bool intervals_overlap;         // 2 eps >= min gap between distinct centers
  bool ok;  // no unmatched values, and m_found == m_expected for every cluster
            // whose full window [nu - eps, nu + eps] lies inside the band R
};

// greedy nearest-center assignment: each rescaled value goes to the closest
// oracle center and is matched iff the distance is <= eps
ClusterReport cluster_match(const std::vector<double>& rescaled,
                            const std::vector<OracleCluster>& oracle, double eps,
                            double R);

struct GapScalingFit {
  std::vector<double> hs, gaps, gap_over_h2;
  double nu_hat;  // Richardson extrapolation from the last dyadic pair
  double order;   // observed convergence order from the last triple (NaN if < 3)
  double band_lo, band_hi;
  bool in_band;   // every gap/h^2 inside [0.5, 1.5] nu_hat
  bool monotone;  // gap strictly increases with h
};

// hs must be strictly decreasing and dyadic (each h half the previous)
GapScalingFit gap_scaling_fit(const Model& m, const std::vector<double>& hs, int M,
                              int q);

struct WeylPoint {
  double lambda;
  long long count;  // #{ rescaled values <= lambda }
};
std::vector<WeylPoint> weyl_count(const std::vector<double>& rescaled,
                                  const std::vector<double>& lambdas);

// discrete form <u, (1-T)u>/h^2 and limit form <u, L u> in the coefficient
// inner product
std::pair<double, double> dirichlet_forms(const GalerkinOperator& T,
                                          const GalerkinOperator& L,
                                          const Eigen::VectorXd& u);

struct ConsistencyReport {
  std::vector<double> hs;
  std::vector<double> errors;  // sup-norm of (f - T_h f)/h^2 - L f on the grid
  std::vector<double> ratios;  // errors[i] / errors[i+1], expect ~4 for dyadic hs
};
ConsistencyReport generator_consistency(const Model& m, const TrigPoly& f,
                                        const std::vector<double>& hs, int M, int q);

struct ProjectorSplit {
  Eigen::VectorXd low;   // components on eigenvalues >= 1 - c4
  Eigen::VectorXd tail;  // the rest; low + tail = f exactly
  double tail_supnorm;   // sup of the tail on the 4(2M+1) grid per axis
  int low_count;
};
ProjectorSplit spectral_projectors(const GalerkinOperator& T, double c4,
                                   const Eigen::VectorXd& f);

struct SupnormScanEntry {
  double rescaled;
  double supnorm;
  int block_n;
};
struct SupnormScan {
  std::vector<SupnormScanEntry> entries;  // rescaled <= R, ascending
  double fit_exponent;  // LSQ slope of log(sup) against log(1 + rescaled)
  double max_supnorm;
};
SupnormScan eigenfunction_supnorm_scan(const GalerkinOperator& T, double R);

struct ChapmanReport {
  std::vector<double> deltas;
  std::vector<double> defect;  // max_{n <= delta/h^2} sup |T^n f - f + n(1-T)f|
  std::vector<double> ratio;   // defect / delta^2
  double variation;            // max ratio / min ratio
};
ChapmanReport chapman_taylor_check(const GalerkinOperator& T, const Eigen::VectorXd& f,
                                   const std::vector<double>& deltas);

}  // namespace hypowalk
