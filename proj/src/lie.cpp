#include "hypowalk/lie.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypowalk {

LieStructure LieStructure::build_free_nilpotent(int p, int r) {
  if (p < 1 || p > 4) throw std::invalid_argument("build_free_nilpotent: p must be in [1,4]");
  if (r < 1 || r > 5) throw std::invalid_argument("build_free_nilpotent: r must be in [1,5]");
  LieStructure s;
  s.p_ = p;
  s.r_ = r;
  s.build_basis();
  s.build_dynkin_terms();
  return s;
}

void LieStructure::build_basis() {
  basis_.clear();
  for (int g = 0; g < p_; ++g) basis_.push_back({1, -1, -1, g});
  layer_dims_.assign(r_, 0);
  layer_dims_[0] = p_;

  for (int n = 2; n <= r_; ++n) {
    const int existing = static_cast<int>(basis_.size());
    for (int a = 0; a < existing; ++a) {
      const int du = n - basis_[a].deg;
      if (du < 1) continue;
      for (int u = a + 1; u < existing; ++u) {
        if (basis_[u].deg != du) continue;
        // Hall condition: u a generator, or u = [b,v] with b <= a
        if (basis_[u].deg > 1 && basis_[u].left > a) continue;
        if (basis_[u].deg == 1 && basis_[a].deg != 1) continue;  // unreachable, a < u
        basis_.push_back({n, a, u, -1});
        ++layer_dims_[n - 1];
      }
    }
  }

  const int D = dim();
  pair_index_.assign(D, std::vector<int>(D, -1));
  for (int i = 0; i < D; ++i)
    if (basis_[i].deg > 1) pair_index_[basis_[i].left][basis_[i].right] = i;

  memo_state_.assign(D, std::vector<signed char>(D, 0));
  memo_.assign(D, std::vector<SparseRat>(D));

  Q_ = 0;
  for (int j = 1; j <= r_; ++j) Q_ += static_cast<long long>(j) * layer_dims_[j - 1];
}

std::string LieStructure::name(int idx) const {
  const auto& e = basis_[idx];
  if (e.deg == 1) return "Z" + std::to_string(e.gen + 1);
  return "[" + name(e.left) + "," + name(e.right) + "]";
}

int LieStructure::hall_index(int a, int b) const { return pair_index_[a][b]; }

const SparseRat& LieStructure::bracket_basis(int a, int b) const {
  static const SparseRat empty;
  if (a == b) return empty;
  if (basis_[a].deg + basis_[b].deg > r_) return empty;
  const int lo = std::min(a, b), hi = std::max(a, b);
  if (memo_state_[lo][hi] == 1)
    throw std::logic_error("bracket rewriting cycle (Hall order violated)");
  if (memo_state_[lo][hi] == 0) {
    memo_state_[lo][hi] = 1;
    SparseRat v = bracket_basis_impl(lo, hi);
    memo_[lo][hi] = std::move(v);
    SparseRat neg;
    neg.reserve(memo_[lo][hi].size());
    for (const auto& [k, c] : memo_[lo][hi]) neg.emplace_back(k, -c);
    memo_[hi][lo] = std::move(neg);
    memo_state_[lo][hi] = memo_state_[hi][lo] = 2;
  }
  return memo_[a][b];
}

// precondition: a < b, deg a + deg b <= r
SparseRat LieStructure::bracket_basis_impl(int a, int b) const {
  if (basis_[b].deg == 1 || basis_[b].left <= a) {
    const int idx = hall_index(a, b);
    if (idx < 0) throw std::logic_error("Hall pair missing from basis");
    return {{idx, Rat(1)}};
  }
  // b = [b1,b2] with b1 > a: Jacobi gives [a,[b1,b2]] = [[a,b1],b2] + [b1,[a,b2]]
  const int b1 = basis_[b].left, b2 = basis_[b].right;
  std::vector<Rat> acc(dim(), Rat(0));
  for (const auto& [x, cx] : bracket_basis(a, b1))
    for (const auto& [k, c] : bracket_basis(x, b2)) acc[k] += cx * c;
  for (const auto& [y, cy] : bracket_basis(a, b2))
    for (const auto& [k, c] : bracket_basis(b1, y)) acc[k] += cy * c;
  SparseRat out;
  for (int k = 0; k < dim(); ++k)
    if (!acc[k].is_zero()) out.emplace_back(k, acc[k]);
  return out;
}

void LieStructure::build_dynkin_terms() {
  dynkin_.clear();
  // one block = ad_x^{rx} ad_y^{sy}; a term is a non-empty block sequence of
  // total weight W <= r, coefficient (-1)^{n-1} / (n * W * prod rx! sy!)
  std::vector<std::pair<int, int>> seq;
  const auto fact = [](int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  std::function<void(int)> rec = [&](int weight) {
    if (!seq.empty()) {
      const auto [rn, sn] = seq.back();
      if (sn == 1 || (sn == 0 && rn == 1)) {
        const int n = static_cast<int>(seq.size());
        long long denom = static_cast<long long>(n) * weight;
        std::vector<uint8_t> chain;
        for (const auto& [rx, sy] : seq) {
          denom *= fact(rx) * fact(sy);
          chain.insert(chain.end(), rx, uint8_t{0});
          chain.insert(chain.end(), sy, uint8_t{1});
        }
        // innermost [x,x] or [y,y] vanishes
        const size_t L = chain.size();
        if (!(L >= 2 && chain[L - 1] == chain[L - 2]))
          dynkin_.push_back({Rat((n % 2 == 1) ? 1 : -1, denom), std::move(chain)});
      }
    }
    if (weight >= r_) return;
    for (int w = 1; w + weight <= r_; ++w)
      for (int rx = 0; rx <= w; ++rx) {
        seq.emplace_back(rx, w - rx);
        rec(weight + w);
        seq.pop_back();
      }
  };
  rec(0);
}

std::vector<double> LieStructure::inverse(const std::vector<double>& x) const {
  std::vector<double> out(x);
  for (auto& v : out) v = -v;
  return out;
}

std::vector<double> LieStructure::dilate(double t, const std::vector<double>& x) const {
  std::vector<double> out(x.size());
  double tp = 1.0;
  int idx = 0;
  for (int j = 1; j <= r_; ++j) {
    tp *= t;
    for (int k = 0; k < layer_dims_[j - 1]; ++k, ++idx) out[idx] = x[idx] * tp;
  }
  return out;
}

double LieStructure::homogeneous_norm(const std::vector<double>& x) const {
  // ||| x ||| = (sum_j |x_j|^{2 r!/j})^{1/(2 r!)} with |x_j| the Euclidean norm
  // of layer j; evaluated with the max factored out to avoid under/overflow
  double fact = 1.0;
  for (int i = 2; i <= r_; ++i) fact *= i;
  const double e = 2.0 * fact;

  std::vector<double> scaled;  // |x_j|^{1/j}
  int idx = 0;
  for (int j = 1; j <= r_; ++j) {
    double ss = 0.0;
    for (int k = 0; k < layer_dims_[j - 1]; ++k, ++idx) ss += x[idx] * x[idx];
    const double lj = std::sqrt(ss);
    scaled.push_back(lj > 0.0 ? std::pow(lj, 1.0 / j) : 0.0);
  }
  const double m = *std::max_element(scaled.begin(), scaled.end());
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : scaled) s += std::pow(v / m, e);
  return m * std::pow(s, 1.0 / e);
}

WalkConstants LieStructure::walk_constants() const {
  WalkConstants w;
  w.D = dim();
  w.Q = Q_;
  long long bn = 1;
  for (int n = 1; n <= r_; ++n) {
    w.b.push_back(bn);
    w.P += layer_dims_[n - 1] * bn;
    bn = 2 * bn + 2;
  }
  return w;
}

std::vector<WordLetter> LieStructure::commutator_word(const std::vector<int>& alpha) const {
  const int k = static_cast<int>(alpha.size());
  if (k < 1 || k > r_) throw std::invalid_argument("commutator_word: |alpha| must be in [1,r]");
  for (int a : alpha)
    if (a < 1 || a > p_) throw std::invalid_argument("commutator_word: generator out of range");

  // phi_{(j,beta)} = phi_beta^{-1} e^{-t1 Zj} phi_beta e^{t1 Zj}, letters in
  // application order (rightmost factor first)
  std::function<std::vector<WordLetter>(int)> rec = [&](int from) -> std::vector<WordLetter> {
    const int g = alpha[from] - 1;
    if (from == k - 1) return {{g, from, +1}};
    const auto inner = rec(from + 1);
    std::vector<WordLetter> w;
    w.push_back({g, from, +1});
    w.insert(w.end(), inner.begin(), inner.end());
    w.push_back({g, from, -1});
    for (auto it = inner.rbegin(); it != inner.rend(); ++it)
      w.push_back({it->gen, it->slot, -it->sign});
    return w;
  };
  return rec(0);
}

std::vector<Rat> LieStructure::nested_bracket(const std::vector<int>& alpha) const {
  const int k = static_cast<int>(alpha.size());
  std::vector<Rat> v(dim(), Rat(0));
  v[alpha[k - 1] - 1] = Rat(1);
  for (int i = k - 2; i >= 0; --i) {
    std::vector<Rat> e(dim(), Rat(0));
    e[alpha[i] - 1] = Rat(1);
    v = bracket(e, v);
  }
  return v;
}

std::vector<double> LieStructure::sample_box(double eps, double h,
                                             const std::function<double()>& uniform01) const {
  if (eps <= 0.0) throw std::invalid_argument("sample_box: eps must be positive");
  if (h <= 0.0 || h > 1.0) throw std::invalid_argument("sample_box: h must be in (0,1]");
  std::vector<double> u(dim());
  int idx = 0;
  double hp = 1.0;
  for (int j = 1; j <= r_; ++j) {
    hp *= h;
    for (int k = 0; k < layer_dims_[j - 1]; ++k, ++idx)
      u[idx] = eps * (2.0 * uniform01() - 1.0) * hp;
  }
  return u;
}

double LieStructure::box_volume_mc(double eps, double h, long long n,
                                   const std::function<double()>& uniform01) const {
  // reference box with half-widths max(1,eps) h^{deg}; the indicator fraction
  // times the reference volume estimates Vol(I_{eps,h}); report h^{-Q} * Vol
  const double ref = std::max(1.0, eps);
  long long inside = 0;
  std::vector<double> hp(r_ + 1, 1.0);
  for (int j = 1; j <= r_; ++j) hp[j] = hp[j - 1] * h;
  for (long long it = 0; it < n; ++it) {
    bool ok = true;
    int idx = 0;
    for (int j = 1; j <= r_; ++j)
      for (int k = 0; k < layer_dims_[j - 1]; ++k, ++idx) {
        const double u = ref * (2.0 * uniform01() - 1.0) * hp[j];
        if (std::abs(u) >= eps * hp[j]) ok = false;
      }
    if (ok) ++inside;
  }
  double vol_ref = 1.0;
  int idx = 0;
  for (int j = 1; j <= r_; ++j)
    for (int k = 0; k < layer_dims_[j - 1]; ++k, ++idx) vol_ref *= 2.0 * ref * hp[j];
  const double frac = static_cast<double>(inside) / static_cast<double>(n);
  return std::pow(h, -static_cast<double>(Q_)) * vol_ref * frac;
}

}  // namespace hypowalk
