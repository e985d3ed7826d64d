#include "hypowalk/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace hypowalk {

FourierBasis::FourierBasis(int M_) : M(M_) {
  if (M < 1) throw std::invalid_argument("FourierBasis: M must be >= 1");
}

Eigen::VectorXd trig_to_coeffs(const TrigPoly& f, int M) {
  FourierBasis b(M);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(b.dim());
  const double s = 1.0 / std::sqrt(2.0);
  for (const auto& t : f) {
    if (std::abs(t.m) > M || std::abs(t.n) > M)
      throw std::invalid_argument("trig_to_coeffs: frequency exceeds the cutoff M");
    double a = t.c;
    if (t.m != 0) a *= s;  // cos/sin = phi / sqrt(2)
    if (t.n != 0) a *= s;
    c[b.idx(t.m, t.n)] += a;
  }
  return c;
}

static double phi(int kappa, double x) {
  if (kappa == 0) return 1.0;
  const double sq2 = std::sqrt(2.0);
  const double ang = 2.0 * M_PI * std::abs(kappa) * x;
  return kappa > 0 ? sq2 * std::cos(ang) : sq2 * std::sin(ang);
}

double eval_coeffs(const Eigen::VectorXd& c, int M, double x, double y) {
  FourierBasis b(M);
  if (c.size() != b.dim()) throw std::invalid_argument("eval_coeffs: size mismatch");
  double acc = 0.0;
  for (int n = -M; n <= M; ++n) {
    const double pn = phi(n, y);
    if (pn == 0.0) continue;
    double inner = 0.0;
    for (int m = -M; m <= M; ++m) inner += c[b.idx(m, n)] * phi(m, x);
    acc += pn * inner;
  }
  return acc;
}

Eigen::MatrixXd basis_table(int M, int G) {
  if (G < 1) throw std::invalid_argument("basis_table: G must be >= 1");
  Eigen::MatrixXd B(2 * M + 1, G);
  for (int i = 0; i < G; ++i) {
    const double x = double(i) / double(G);
    for (int k = -M; k <= M; ++k) B(k + M, i) = phi(k, x);
  }
  return B;
}

Eigen::MatrixXd eval_on_grid(const Eigen::VectorXd& c, int M, int G) {
  FourierBasis b(M);
  if (c.size() != b.dim()) throw std::invalid_argument("eval_on_grid: size mismatch");
  const int np = b.nper();
  Eigen::MatrixXd C(np, np);  // C(m + M, n + M)
  for (int n = 0; n < np; ++n)
    for (int m = 0; m < np; ++m) C(m, n) = c[n * np + m];
  const Eigen::MatrixXd B = basis_table(M, G);
  // f(x_i, y_j) = sum_{m,n} C(m,n) B(m,i) B(n,j)
  return B.transpose() * C * B;
}

std::vector<double> cosine_coeffs_even(const std::function<double(double)>& g,
                                       int kmax, int samples) {
  if (samples < 2 * kmax + 2)
    throw std::invalid_argument("cosine_coeffs_even: too few samples for kmax");
  std::vector<double> vals(samples);
  for (int j = 0; j < samples; ++j) vals[j] = g(double(j) / double(samples));
  std::vector<double> ghat(kmax + 1, 0.0);
  for (int k = 0; k <= kmax; ++k) {
    double acc = 0.0;
    for (int j = 0; j < samples; ++j)
      acc += vals[j] * std::cos(2.0 * M_PI * double(k) * double(j) / double(samples));
    ghat[k] = acc / double(samples);
  }
  return ghat;
}

Eigen::MatrixXd mult_matrix_even(const std::vector<double>& ghat, int M) {
  // Entries of int g phi_kappa phi_kappa' for even g.  With the complex
  // coefficients g_hat(k) = int g cos(2 pi k x):
  //   cos-cos:  g_hat(m - m') + g_hat(m + m')
  //   sin-sin:  g_hat(m - m') - g_hat(m + m')
  //   edge:     sqrt(2) g_hat(m) against the constant; cos-sin vanish.
  const int np = 2 * M + 1;
  const int kmax = int(ghat.size()) - 1;
  auto gh = [&](int k) {
    k = std::abs(k);
    return k <= kmax ? ghat[size_t(k)] : 0.0;
  };
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(np, np);
  S(M, M) = gh(0);
  const double sq2 = std::sqrt(2.0);
  for (int m = 1; m <= M; ++m) {
    S(M + m, M) = S(M, M + m) = sq2 * gh(m);
    for (int mp = 1; mp <= M; ++mp) {
      S(M + m, M + mp) = gh(m - mp) + gh(m + mp);
      S(M - m, M - mp) = gh(m - mp) - gh(m + mp);
    }
  }
  return S;
}

}  // namespace hypowalk
