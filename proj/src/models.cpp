#include "hypowalk/models.hpp"

#include <cmath>
#include <stdexcept>

#include "hypowalk/kern.hpp"

namespace hypowalk {

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;

void check_field_index(const Model& m, int k) {
  if (k < 1 || k > m.p()) throw std::invalid_argument("field index out of range");
}

class Flat2 final : public Model {
public:
  const char* name() const noexcept override { return "flat2"; }
  int p() const noexcept override { return 2; }
  int step_r() const noexcept override { return 1; }
  bool compact() const noexcept override { return true; }

  Pt flow(int k, double t, Pt x) const override {
    check_field_index(*this, k);
    if (k == 1) return {kern::wrap01(x[0] + t), x[1]};
    return {x[0], kern::wrap01(x[1] + t)};
  }
  Pt field(int k, Pt) const override {
    check_field_index(*this, k);
    return k == 1 ? Pt{1.0, 0.0} : Pt{0.0, 1.0};
  }
  std::vector<Pt> bracket_frame(Pt) const override {
    return {{1.0, 0.0}, {0.0, 1.0}};
  }
};

class Grushin2 final : public Model {
public:
  const char* name() const noexcept override { return "grushin2"; }
  int p() const noexcept override { return 2; }
  int step_r() const noexcept override { return 2; }
  bool compact() const noexcept override { return true; }

  Pt flow(int k, double t, Pt x) const override {
    check_field_index(*this, k);
    if (k == 1) return {kern::wrap01(x[0] + t), x[1]};
    // X2 = sin(2 pi x) d/dy: x is frozen along the flow, so this is exact;
    // the fma mirrors the sampling kernels bit for bit
    return {x[0], kern::wrap01(std::fma(t, kern::sin2pi(x[0]), x[1]))};
  }
  Pt field(int k, Pt x) const override {
    check_field_index(*this, k);
    return k == 1 ? Pt{1.0, 0.0} : Pt{0.0, kern::sin2pi(x[0])};
  }
  std::vector<Pt> bracket_frame(Pt x) const override {
    // [X1, X2] = 2 pi cos(2 pi x) d/dy
    return {{1.0, 0.0},
            {0.0, kern::sin2pi(x[0])},
            {0.0, TWO_PI * std::cos(TWO_PI * x[0])}};
  }
};

class HeisLift final : public Model {
public:
  const char* name() const noexcept override { return "heis_lift"; }
  int p() const noexcept override { return 2; }
  int step_r() const noexcept override { return 2; }
  bool compact() const noexcept override { return false; }

  Pt flow(int k, double t, Pt x) const override {
    check_field_index(*this, k);
    if (k == 1) return {x[0] + t, x[1]};
    // X2 = x d/dy, x frozen along the flow
    return {x[0], std::fma(t, x[0], x[1])};
  }
  Pt field(int k, Pt x) const override {
    check_field_index(*this, k);
    return k == 1 ? Pt{1.0, 0.0} : Pt{0.0, x[0]};
  }
  std::vector<Pt> bracket_frame(Pt x) const override {
    // [X1, X2] = d/dy
    return {{1.0, 0.0}, {0.0, x[0]}, {0.0, 1.0}};
  }
  Pt canonicalize(Pt x) const override { return x; }
};

}  // namespace

Pt Model::canonicalize(Pt x) const {
  return {kern::wrap01(x[0]), kern::wrap01(x[1])};
}

const Model& model_by_name(const std::string& name) {
  static const Flat2 flat2;
  static const Grushin2 grushin2;
  static const HeisLift heis_lift;
  if (name == "flat2") return flat2;
  if (name == "grushin2") return grushin2;
  if (name == "heis_lift") return heis_lift;
  throw std::invalid_argument("unknown model: " + name);
}

int hormander_rank(const Model& m, Pt x) {
  const auto frame = m.bracket_frame(x);
  // rank of a set of 2-vectors: scan for the largest well-conditioned minor
  double best1 = 0.0, best2 = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    best1 = std::max(best1, std::hypot(frame[i][0], frame[i][1]));
    for (std::size_t j = i + 1; j < frame.size(); ++j)
      best2 = std::max(best2,
                       std::abs(frame[i][0] * frame[j][1] - frame[i][1] * frame[j][0]));
  }
  if (best2 > 1e-12) return 2;
  return best1 > 1e-12 ? 1 : 0;
}

double divergence_residual(const Model& m, int k, Pt x) {
  check_field_index(m, k);
  const double d = 1e-5;
  const double dxx =
      (m.field(k, {x[0] + d, x[1]})[0] - m.field(k, {x[0] - d, x[1]})[0]) / (2 * d);
  const double dyy =
      (m.field(k, {x[0], x[1] + d})[1] - m.field(k, {x[0], x[1] - d})[1]) / (2 * d);
  return dxx + dyy;
}

Pt lift_flow(const std::array<double, 3>& u, Pt xy) {
  return {xy[0] + u[0], xy[1] + u[2] + u[1] * xy[0] + 0.5 * u[0] * u[1]};
}

}  // namespace hypowalk
