#pragma once

// Real orthonormal Fourier basis on the torus.  Circle index kappa runs over
// [-M, M]:
//   phi_0 = 1,  phi_k = sqrt(2) cos(2 pi k x) (k > 0),
//   phi_k = sqrt(2) sin(2 pi |k| x) (k < 0).
// 2D basis functions are the products phi_m(x) phi_n(y); coefficient vectors
// are laid out block-major by the y index n, then the x index m, so the
// operators' per-y-frequency blocks act on contiguous slices.

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace hypowalk {

struct FourierBasis {
  int M;
  explicit FourierBasis(int M_);
  int nper() const { return 2 * M + 1; }
  int dim() const { return nper() * nper(); }
  int idx(int m, int n) const { return (n + M) * nper() + (m + M); }
};

// One term c * cm(x) * cn(y) of a trigonometric polynomial, with
// cm = cos(2 pi m x) for m > 0, sin(2 pi |m| x) for m < 0, 1 for m = 0
// (and likewise cn in y).
struct TrigTerm {
  int m, n;
  double c;
};
using TrigPoly = std::vector<TrigTerm>;

// orthonormal-basis coefficient vector; throws if a frequency exceeds M
Eigen::VectorXd trig_to_coeffs(const TrigPoly& f, int M);

// point evaluation of a coefficient vector
double eval_coeffs(const Eigen::VectorXd& c, int M, double x, double y);

// table phi_kappa(i/G) of size (2M+1) x G
Eigen::MatrixXd basis_table(int M, int G);

// values on the uniform G x G grid (row = x index, column = y index)
Eigen::MatrixXd eval_on_grid(const Eigen::VectorXd& c, int M, int G);

// Fourier coefficients (complex convention) g_hat(k) = int_0^1 g cos(2 pi k x) dx
// for an even function g, k = 0..kmax, by DFT over `samples` points;
// spectrally accurate for analytic g
std::vector<double> cosine_coeffs_even(const std::function<double(double)>& g,
                                       int kmax, int samples);

// real-basis matrix of multiplication by the even function with the given
// cosine coefficients (index 0..kmax as produced by cosine_coeffs_even);
// exactly symmetric by construction
Eigen::MatrixXd mult_matrix_even(const std::vector<double>& ghat, int M);

}  // namespace hypowalk
