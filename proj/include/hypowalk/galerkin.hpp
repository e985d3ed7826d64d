#pragma once

// Galerkin matrices of the averaging operator T_h and of the limiting
// generator L in the real Fourier basis.  Both operators commute with
// translations in y for the models handled here, so they are stored as one
// symmetric block per y frequency n in [-M, M]; the block acts on the x slice
// phi_m(x) phi_n(y), m in [-M, M].

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "hypowalk/fourier.hpp"
#include "hypowalk/models.hpp"

namespace hypowalk {

enum class OpKind { transfer, generator };

struct GalerkinOperator {
  OpKind kind;
  std::string model;
  double h;  // step size; 0 for the generator
  int M;
  int q;                   // assembly quadrature order (0 = fully analytic)
  double raw_asymmetry;    // max |A - A^T| entry before symmetrization
  std::vector<Eigen::MatrixXd> blocks;  // y frequency n stored at n + M
  const Eigen::MatrixXd& block(int n) const { return blocks[size_t(n + M)]; }
  int nper() const { return 2 * M + 1; }
  int dim() const { return nper() * nper(); }
};

// T_h = (1/p) sum_k (1/2h) int_{-h}^h f(e^{t X_k} x) dt, assembled with the
// time average done analytically (sinc factors) and the x dependence of the
// Grushin vertical entry expanded by a length-q-scaled DFT
GalerkinOperator assemble_transfer(const Model& m, double h, int M, int q);

// cross-check variant: the time average uses Gauss-Legendre quadrature with
// q_t nodes; agrees with assemble_transfer once q_t resolves 2 pi M h
GalerkinOperator assemble_transfer_quad(const Model& m, double h, int M, int q_t,
                                        int q);

// L = -(1 / (6 p)) sum_k X_k^2
GalerkinOperator assemble_generator(const Model& m, int M);

struct EigenPair {
  double value;
  int block_n;
  int index_in_block;  // position in the block's ascending eigenvalue list
};

struct EigenDecomp {
  OpKind kind;
  double h;
  int M;
  std::vector<Eigen::VectorXd> values;   // per block, ascending
  std::vector<Eigen::MatrixXd> vectors;  // per block, columns match values
  std::vector<EigenPair> order;  // transfer: descending; generator: ascending;
                                 // ties broken by (block_n, index_in_block)
};

EigenDecomp eigen_decompose(const GalerkinOperator& op);

Eigen::VectorXd apply_op(const GalerkinOperator& op, const Eigen::VectorXd& c);
Eigen::VectorXd apply_power(const GalerkinOperator& op, long long n,
                            Eigen::VectorXd c);

struct MarkovReport {
  double const_defect;       // |T 1 - 1| in the coefficient norm
  double symmetry_residual;  // post-symmetrization; exactly 0
  double max_abs_eigenvalue;
  double min_eigenvalue;
  double second_eigenvalue;  // largest eigenvalue below the top one
  bool top_simple;
};
MarkovReport markov_checks(const GalerkinOperator& op);

// Gauss-Legendre nodes and weights on [-1, 1]
void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights);

// sin(x)/x with the removable singularity handled
double sinc(double x);

}  // namespace hypowalk
