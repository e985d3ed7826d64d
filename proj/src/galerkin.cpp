#include "hypowalk/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>

namespace hypowalk {

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w) {
  if (q < 1) throw std::invalid_argument("gauss_legendre: q must be >= 1");
  x.assign(size_t(q), 0.0);
  w.assign(size_t(q), 0.0);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    // i-th largest root, Newton on the recurrence for P_q
    double xi = std::cos(M_PI * (double(i) + 0.75) / (double(q) + 0.5));
    if (i == q - 1 - i) xi = 0.0;  // middle root of odd order is exact
    double pp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < q; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * xi * p1 - double(j) * p2) / double(j + 1);
      }
      if (xi == 0.0) {
        pp = double(q) * (0.0 - p1) / (-1.0);  // P_q'(0) = q P_{q-1}(0)
        break;
      }
      pp = double(q) * (xi * p0 - p1) / (xi * xi - 1.0);
      const double dx = p0 / pp;
      xi -= dx;
      if (std::abs(dx) < 1e-15 * std::abs(xi) + 1e-300) break;
    }
    x[size_t(q - 1 - i)] = xi;
    x[size_t(i)] = -xi;
    w[size_t(i)] = w[size_t(q - 1 - i)] = 2.0 / ((1.0 - xi * xi) * pp * pp);
  }
}

namespace {

void check_compact_args(const Model& m, double h, int M, int q) {
  if (std::string_view(m.name()) == "heis_lift")
    throw std::invalid_argument("galerkin: heis_lift is non-compact; no Fourier discretization");
  if (!(h > 0.0 && h <= 0.5))
    throw std::invalid_argument("galerkin: h must lie in (0, 0.5]");
  if (M < 2) throw std::invalid_argument("galerkin: M must be >= 2");
  if (q < 8) throw std::invalid_argument("galerkin: q must be >= 8");
}

// Time average of cos(theta t / h) over t in [-h, h]; exact form is
// sinc(theta).  `avg` abstracts the two assembly paths.
using TimeAvg = std::function<double(double)>;

GalerkinOperator assemble_transfer_impl(const Model& m, double h, int M, int q,
                                        const TimeAvg& avg, bool analytic_time) {
  check_compact_args(m, h, M, q);
  GalerkinOperator op;
  op.kind = OpKind::transfer;
  op.model = m.name();
  op.h = h;
  op.M = M;
  op.q = analytic_time ? 0 : q;
  const int np = 2 * M + 1;
  const double tp = 2.0 * M_PI;

  // horizontal part: translation in x averages to diag(avg(2 pi |kappa| h))
  Eigen::VectorXd dx(np);
  for (int k = -M; k <= M; ++k) dx[size_t(k + M)] = avg(tp * std::abs(k) * h);

  op.blocks.resize(size_t(np));
  double raw = 0.0;
  for (int n = 0; n <= M; ++n) {
    Eigen::MatrixXd S;
    if (std::string_view(m.name()) == "flat2") {
      S = Eigen::MatrixXd::Zero(np, np);
      S.diagonal().setConstant(avg(tp * n * h));
    } else {  // grushin2: vertical speed sin(2 pi x)
      if (n == 0) {
        S = Eigen::MatrixXd::Identity(np, np);  // constant y mode is exactly fixed
      } else {
        const int Ns = std::max(4, q / 2) * np;
        auto g = [&](double x) { return avg(tp * n * h * std::sin(tp * x)); };
        S = mult_matrix_even(cosine_coeffs_even(g, 2 * M, Ns), M);
      }
    }
    Eigen::MatrixXd B = 0.5 * (Eigen::MatrixXd(dx.asDiagonal()) + S);
    raw = std::max(raw, (B - B.transpose()).cwiseAbs().maxCoeff());
    B = 0.5 * (B + B.transpose()).eval();
    op.blocks[size_t(n + M)] = B;
    if (n > 0) op.blocks[size_t(M - n)] = B;  // avg is even in n
  }
  op.raw_asymmetry = raw;
  return op;
}

}  // namespace

GalerkinOperator assemble_transfer(const Model& m, double h, int M, int q) {
  return assemble_transfer_impl(m, h, M, q, [](double th) { return sinc(th); }, true);
}

GalerkinOperator assemble_transfer_quad(const Model& m, double h, int M, int q_t,
                                        int q) {
  if (q_t < 2) throw std::invalid_argument("assemble_transfer_quad: q_t must be >= 2");
  std::vector<double> xi, w;
  gauss_legendre(q_t, xi, w);
  // Pair the symmetric nodes so odd contributions cancel exactly:
  // (1/2) sum_i w_i cos(theta xi_i) = sum_{xi_i > 0} w_i cos(theta xi_i) [+ w_mid / 2]
  std::vector<double> xp, wp;
  double w0 = 0.0;
  for (int i = 0; i < q_t; ++i) {
    if (xi[size_t(i)] > 0.0) {
      xp.push_back(xi[size_t(i)]);
      wp.push_back(w[size_t(i)]);
    } else if (xi[size_t(i)] == 0.0) {
      w0 = 0.5 * w[size_t(i)];
    }
  }
  auto avg = [xp, wp, w0](double th) {
    double acc = w0;
    for (size_t i = 0; i < xp.size(); ++i) acc += wp[i] * std::cos(th * xp[i]);
    return acc;
  };
  return assemble_transfer_impl(m, h, M, q, avg, false);
}

GalerkinOperator assemble_generator(const Model& m, int M) {
  if (std::string_view(m.name()) == "heis_lift")
    throw std::invalid_argument("galerkin: heis_lift is non-compact; no Fourier discretization");
  if (M < 2) throw std::invalid_argument("galerkin: M must be >= 2");
  GalerkinOperator op;
  op.kind = OpKind::generator;
  op.model = m.name();
  op.h = 0.0;
  op.M = M;
  op.q = 0;
  const int np = 2 * M + 1;
  const double tp = 2.0 * M_PI;

  Eigen::VectorXd dx2(np);  // (2 pi kappa)^2
  for (int k = -M; k <= M; ++k) dx2[size_t(k + M)] = tp * tp * double(k) * double(k);

  // grushin2 vertical factor sin^2(2 pi x) = 1/2 - (1/2) cos(4 pi x)
  Eigen::MatrixXd Gm;
  if (std::string_view(m.name()) == "grushin2")
    Gm = mult_matrix_even({0.5, 0.0, -0.25}, M);

  op.blocks.resize(size_t(np));
  for (int n = -M; n <= M; ++n) {
    Eigen::MatrixXd B = Eigen::MatrixXd(dx2.asDiagonal());
    if (std::string_view(m.name()) == "flat2")
      B.diagonal().array() += tp * tp * double(n) * double(n);
    else
      B += (tp * double(n)) * (tp * double(n)) * Gm;
    op.blocks[size_t(n + M)] = (1.0 / 12.0) * B;
  }
  op.raw_asymmetry = 0.0;
  return op;
}

EigenDecomp eigen_decompose(const GalerkinOperator& op) {
  EigenDecomp d;
  d.kind = op.kind;
  d.h = op.h;
  d.M = op.M;
  const int np = op.nper();
  d.values.resize(size_t(np));
  d.vectors.resize(size_t(np));
  for (int n = -op.M; n <= op.M; ++n) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.block(n));
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigen_decompose: solver failed");
    d.values[size_t(n + op.M)] = es.eigenvalues();
    d.vectors[size_t(n + op.M)] = es.eigenvectors();
    for (int i = 0; i < np; ++i)
      d.order.push_back({es.eigenvalues()[i], n, i});
  }
  const bool desc = op.kind == OpKind::transfer;
  std::sort(d.order.begin(), d.order.end(),
            [desc](const EigenPair& a, const EigenPair& b) {
              if (a.value != b.value) return desc ? a.value > b.value : a.value < b.value;
              if (a.block_n != b.block_n) return a.block_n < b.block_n;
              return a.index_in_block < b.index_in_block;
            });
  return d;
}

Eigen::VectorXd apply_op(const GalerkinOperator& op, const Eigen::VectorXd& c) {
  const int np = op.nper();
  if (c.size() != op.dim()) throw std::invalid_argument("apply_op: size mismatch");
  Eigen::VectorXd out(c.size());
  for (int n = -op.M; n <= op.M; ++n)
    out.segment((n + op.M) * np, np) = op.block(n) * c.segment((n + op.M) * np, np);
  return out;
}

Eigen::VectorXd apply_power(const GalerkinOperator& op, long long n,
                            Eigen::VectorXd c) {
  if (n < 0) throw std::invalid_argument("apply_power: n must be >= 0");
  for (long long i = 0; i < n; ++i) c = apply_op(op, c);
  return c;
}

MarkovReport markov_checks(const GalerkinOperator& op) {
  if (op.kind != OpKind::transfer)
    throw std::invalid_argument("markov_checks: expects a transfer operator");
  MarkovReport r;
  const Eigen::VectorXd one = trig_to_coeffs({{0, 0, 1.0}}, op.M);
  r.const_defect = (apply_op(op, one) - one).cwiseAbs().maxCoeff();
  double sym = 0.0;
  for (const auto& B : op.blocks)
    sym = std::max(sym, (B - B.transpose()).cwiseAbs().maxCoeff());
  r.symmetry_residual = sym;
  const EigenDecomp d = eigen_decompose(op);
  r.max_abs_eigenvalue = std::max(std::abs(d.order.front().value),
                                  std::abs(d.order.back().value));
  r.min_eigenvalue = d.order.back().value;
  r.second_eigenvalue = d.order[1].value;
  r.top_simple = d.order[0].value > 1.0 - 1e-10 && d.order[1].value < 1.0 - 1e-8;
  return r;
}

}  // namespace hypowalk
