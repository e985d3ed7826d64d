#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hypowalk/rational.hpp"

namespace hypowalk {

// Free nilpotent Lie algebra N = N_1 + ... + N_r on p generators, presented in
// a classical Hall basis (generators ordered Z1 < Z2 < ... < Zp, elements
// ordered by degree then creation). Degree-n elements are [a,u] with a < u and,
// when u = [b,v], b <= a; brackets landing beyond layer r truncate to zero.
// Structure constants are exact rationals (integers, in fact) and the
// group product is the Dynkin-form BCH series truncated at r factors, which is
// exact on a step-r nilpotent algebra.

struct HallElement {
  int deg;
  int left;   // basis index of left factor, -1 for generators
  int right;  // basis index of right factor, -1 for generators
  int gen;    // 0-based generator number when deg == 1, else -1
};

// One exponential letter e^{sign * t[slot] * Z_gen} of a commutator word,
// letters listed in application order (first letter acts first).
struct WordLetter {
  int gen;   // 0-based generator index
  int slot;  // 0-based time-slot: the letter carries t[slot]
  int sign;  // +1 or -1
};

struct WalkConstants {
  std::vector<long long> b;  // b_1..b_r, b_1 = 1, b_{n+1} = 2 b_n + 2
  long long P = 0;           // sum_j a_j b_j
  int D = 0;
  long long Q = 0;
};

// (basis index, coefficient) pairs, index-sorted, zero coefficients dropped
using SparseRat = std::vector<std::pair<int, Rat>>;

namespace detail {
template <class S> inline S scalar_cast(const Rat& r) { return S(r); }
template <> inline double scalar_cast<double>(const Rat& r) { return r.to_double(); }
}  // namespace detail

class LieStructure {
public:
  // p in [1,4], r in [1,5]; throws std::invalid_argument outside the caps
  static LieStructure build_free_nilpotent(int p, int r);

  int p() const { return p_; }
  int r() const { return r_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  long long Q() const { return Q_; }
  const std::vector<HallElement>& basis() const { return basis_; }
  const std::vector<int>& layer_dims() const { return layer_dims_; }
  int degree_of(int idx) const { return basis_[idx].deg; }
  std::string name(int idx) const;  // e.g. "[Z1,[Z1,Z2]]"

  // exact bracket of two basis elements, expanded in the Hall basis
  const SparseRat& bracket_basis(int a, int b) const;

  // bilinear bracket of coordinate vectors (length dim())
  template <class S>
  std::vector<S> bracket(const std::vector<S>& x, const std::vector<S>& y) const;

  // group product exp^{-1}(exp(x) exp(y)) via truncated Dynkin BCH
  template <class S>
  std::vector<S> product(const std::vector<S>& x, const std::vector<S>& y) const;

  std::vector<double> inverse(const std::vector<double>& x) const;  // -x
  std::vector<double> dilate(double t, const std::vector<double>& x) const;
  double homogeneous_norm(const std::vector<double>& x) const;

  WalkConstants walk_constants() const;

  // signed word of phi_alpha; alpha uses 1-based generator numbers
  std::vector<WordLetter> commutator_word(const std::vector<int>& alpha) const;

  // fold the word's exponentials through the group product (left-invariant
  // realization: letters right-multiply in application order)
  template <class S>
  std::vector<S> evaluate_word(const std::vector<WordLetter>& word,
                               const std::vector<S>& t) const;

  // nested bracket Z^alpha = [Z_{a1},[Z_{a2},[...,Z_{ak}]]] as a Hall vector
  std::vector<Rat> nested_bracket(const std::vector<int>& alpha) const;

  // one draw of the box I_{eps,h}: u_i uniform in (-eps h^{deg_i}, eps h^{deg_i});
  // uniform01 supplies i.i.d. draws in [0,1)
  std::vector<double> sample_box(double eps, double h,
                                 const std::function<double()>& uniform01) const;

  // MC estimate of h^{-Q} Vol(I_{eps,h}) (the mass of S^eps_h), which equals
  // (2 eps)^D exactly; kept as an independent volume oracle
  double box_volume_mc(double eps, double h, long long n,
                       const std::function<double()>& uniform01) const;

private:
  LieStructure() = default;
  void build_basis();
  void build_dynkin_terms();
  SparseRat bracket_basis_impl(int a, int b) const;
  int hall_index(int a, int b) const;  // basis index of [a,b] if a Hall pair, else -1

  struct DynkinTerm {
    Rat coeff;
    // chain[0..L-2] are ad applications (0 = ad_x, 1 = ad_y) applied outermost
    // first; chain[L-1] selects the innermost operand (0 = x, 1 = y)
    std::vector<uint8_t> chain;
  };

  int p_ = 0, r_ = 0;
  long long Q_ = 0;
  std::vector<HallElement> basis_;
  std::vector<int> layer_dims_;
  std::vector<std::vector<int>> pair_index_;          // [a][b] -> basis idx or -1
  mutable std::vector<std::vector<signed char>> memo_state_;  // 0 new, 1 in progress, 2 done
  mutable std::vector<std::vector<SparseRat>> memo_;
  std::vector<DynkinTerm> dynkin_;
};

template <class S>
std::vector<S> LieStructure::bracket(const std::vector<S>& x, const std::vector<S>& y) const {
  std::vector<S> out(dim(), S(0));
  for (int i = 0; i < dim(); ++i) {
    if (x[i] == S(0)) continue;
    for (int j = 0; j < dim(); ++j) {
      if (y[j] == S(0)) continue;
      if (basis_[i].deg + basis_[j].deg > r_) continue;
      for (const auto& [k, c] : bracket_basis(i, j))
        out[k] += x[i] * y[j] * detail::scalar_cast<S>(c);
    }
  }
  return out;
}

template <class S>
std::vector<S> LieStructure::product(const std::vector<S>& x, const std::vector<S>& y) const {
  const int D = dim();
  // ad matrices as columns: ad(v)[.][j] = [v, e_j]
  auto ad_columns = [&](const std::vector<S>& v) {
    std::vector<std::vector<std::pair<int, S>>> cols(D);
    for (int j = 0; j < D; ++j) {
      std::vector<S> col(D, S(0));
      bool any = false;
      for (int i = 0; i < D; ++i) {
        if (v[i] == S(0)) continue;
        if (basis_[i].deg + basis_[j].deg > r_) continue;
        for (const auto& [k, c] : bracket_basis(i, j)) {
          col[k] += v[i] * detail::scalar_cast<S>(c);
          any = true;
        }
      }
      if (any)
        for (int k = 0; k < D; ++k)
          if (!(col[k] == S(0))) cols[j].emplace_back(k, col[k]);
    }
    return cols;
  };
  const auto adx = ad_columns(x);
  const auto ady = ad_columns(y);

  std::vector<S> z(D, S(0));
  std::vector<S> v(D), w(D);
  for (const auto& term : dynkin_) {
    const auto& chain = term.chain;
    v = (chain.back() == 0) ? x : y;
    for (int i = static_cast<int>(chain.size()) - 2; i >= 0; --i) {
      const auto& cols = (chain[i] == 0) ? adx : ady;
      std::fill(w.begin(), w.end(), S(0));
      bool any = false;
      for (int j = 0; j < D; ++j) {
        if (v[j] == S(0) || cols[j].empty()) continue;
        for (const auto& [k, c] : cols[j]) { w[k] += v[j] * c; any = true; }
      }
      v.swap(w);
      if (!any) break;
    }
    const S cf = detail::scalar_cast<S>(term.coeff);
    for (int k = 0; k < D; ++k)
      if (!(v[k] == S(0))) z[k] += cf * v[k];
  }
  return z;
}

template <class S>
std::vector<S> LieStructure::evaluate_word(const std::vector<WordLetter>& word,
                                           const std::vector<S>& t) const {
  for (const auto& l : word)
    if (l.slot < 0 || l.slot >= static_cast<int>(t.size()))
      throw std::invalid_argument("evaluate_word: time vector arity does not match word");
  std::vector<S> z(dim(), S(0));
  std::vector<S> e(dim(), S(0));
  for (const auto& l : word) {
    std::fill(e.begin(), e.end(), S(0));
    S s = t[l.slot];
    if (l.sign < 0) s = S(0) - s;
    e[l.gen] = s;
    z = product(z, e);
  }
  return z;
}

}  // namespace hypowalk
