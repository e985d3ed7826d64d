#pragma once

// Concrete manifold models with exact, divergence-free flows satisfying the
// bracket-spanning condition:
//   flat2:     T^2, X1 = d/dx, X2 = d/dy                (step 1)
//   grushin2:  T^2, X1 = d/dx, X2 = sin(2 pi x) d/dy    (step 2)
//   heis_lift: R^2, X1 = d/dx, X2 = x d/dy              (step 2, plane; used
//              for the nilpotent-lift identities, no compact spectrum)

#include <array>
#include <string>
#include <vector>

namespace hypowalk {

using Pt = std::array<double, 2>;

class Model {
public:
  virtual ~Model() = default;
  virtual const char* name() const noexcept = 0;
  virtual int p() const noexcept = 0;       // number of fields
  virtual int step_r() const noexcept = 0;  // bracket step
  virtual bool compact() const noexcept = 0;

  // exact flow of X_k (k is 1-based); torus models wrap into [0,1)^2
  virtual Pt flow(int k, double t, Pt x) const = 0;

  // value of X_k at x
  virtual Pt field(int k, Pt x) const = 0;

  // closed-form bracket frame at x: the X_k followed by the iterated brackets
  // needed up to the model's step (supplied analytically, not by differencing)
  virtual std::vector<Pt> bracket_frame(Pt x) const = 0;

  virtual Pt canonicalize(Pt x) const;
};

// "flat2" | "grushin2" | "heis_lift"; throws std::invalid_argument otherwise
const Model& model_by_name(const std::string& name);

// rank of the bracket frame at x
int hormander_rank(const Model& m, Pt x);

// central finite-difference divergence of X_k at x (cross-check only; the
// fields are divergence-free by construction)
double divergence_residual(const Model& m, int k, Pt x);

// the plane example's nilpotent lift: exp of u1 Z1 + u2 Z2 + u3 [Z1,Z2]
// acting on (x,y); exact closed form
Pt lift_flow(const std::array<double, 3>& u, Pt xy);

}  // namespace hypowalk
