#pragma once

// Weighted tensors at a point whose components are jets.
//
// Components are stored densely, row-major over the slots in their literal
// order. Weights follow the conformal density convention: a tensor in
// E_{ab...}[w] carries weight w, the metric g_ab has weight 2 and its inverse
// weight -2. Components are always trivialised in the current scale.

#include <algorithm>
#include <initializer_list>
#include <numeric>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "c2e/jet.hpp"

namespace c2e {

enum class Slot : std::uint8_t { Up, Down };
using Valence = std::vector<Slot>;

/// "ddu" -> {Down, Down, Up}.
Valence valence(std::string_view spec);
std::string to_string(const Valence& v);

enum class Flavor { Conformal, Projective };

inline std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

/// Decodes a flat row-major index into `rank` digits base `dim`.
inline void unflatten(std::size_t flat, int dim, int rank, int* idx) {
  for (int s = rank - 1; s >= 0; --s) {
    idx[s] = static_cast<int>(flat % static_cast<std::size_t>(dim));
    flat /= static_cast<std::size_t>(dim);
  }
}

inline std::size_t flatten(const int* idx, int dim, int rank) {
  std::size_t f = 0;
  for (int s = 0; s < rank; ++s) f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(idx[s]);
  return f;
}

template <class T>
class Tensor {
 public:
  Tensor() = default;

  Tensor(int dim, Valence val, double weight, const JetLayout& layout)
      : dim_(dim), valence_(std::move(val)), weight_(weight), layout_(&layout) {
    comps_.assign(ipow(dim_, rank()), Jet<T>(layout));
  }

  static Tensor zeros(int dim, std::string_view val, double weight, int jet_dim, int order) {
    return Tensor(dim, c2e::valence(val), weight, jet_layout(jet_dim, order));
  }
  static Tensor zeros_like(const Tensor& o) { return Tensor(o.dim_, o.valence_, o.weight_, *o.layout_); }

  /// Rank-0 tensor wrapping a scalar jet.
  static Tensor scalar(const Jet<T>& j, double weight) {
    Tensor t(1, {}, weight, j.layout());
    t.dim_ = 1;
    t.comps_[0] = j;
    return t;
  }

  bool valid() const { return layout_ != nullptr; }
  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(valence_.size()); }
  const Valence& valence() const { return valence_; }
  Slot slot(int i) const { return valence_[static_cast<std::size_t>(i)]; }
  double weight() const { return weight_; }
  void set_weight(double w) { weight_ = w; }
  const JetLayout& layout() const { return *layout_; }
  int order() const { return layout_->order(); }
  int jet_dim() const { return layout_->dim(); }
  std::size_t size() const { return comps_.size(); }

  Jet<T>& operator[](std::size_t flat) { return comps_[flat]; }
  const Jet<T>& operator[](std::size_t flat) const { return comps_[flat]; }

  Jet<T>& at(std::initializer_list<int> idx) { return comps_[flat_of(idx)]; }
  const Jet<T>& at(std::initializer_list<int> idx) const { return comps_[flat_of(idx)]; }
  Jet<T>& at(const int* idx) { return comps_[flatten(idx, dim_, rank())]; }
  const Jet<T>& at(const int* idx) const { return comps_[flatten(idx, dim_, rank())]; }

  /// Scalar value of a rank-0 tensor.
  const Jet<T>& value() const { return comps_[0]; }

  Tensor truncated(int order) const {
    if (order >= this->order()) return *this;
    Tensor r(dim_, valence_, weight_, layout_->truncated(order));
    for (std::size_t i = 0; i < size(); ++i) r.comps_[i] = comps_[i].truncated(order);
    return r;
  }

  Tensor& operator+=(const Tensor& o) {
    check_compatible(o);
    if (o.order() < order()) *this = truncated(o.order());
    for (std::size_t i = 0; i < size(); ++i) comps_[i] += o.comps_[i];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    check_compatible(o);
    if (o.order() < order()) *this = truncated(o.order());
    for (std::size_t i = 0; i < size(); ++i) comps_[i] -= o.comps_[i];
    return *this;
  }
  Tensor& operator*=(const T& s) {
    for (auto& c : comps_) c *= s;
    return *this;
  }
  /// Multiplication by a scalar jet. Weight is not changed; callers multiply by
  /// weighted scalars through einsum or adjust the weight explicitly.
  Tensor& operator*=(const Jet<T>& s) {
    if (s.order() < order()) *this = truncated(s.order());
    for (auto& c : comps_) c = c * s;
    return *this;
  }

  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, const T& s) { return a *= s; }
  friend Tensor operator*(const T& s, Tensor a) { return a *= s; }
  friend Tensor operator*(Tensor a, const Jet<T>& s) { return a *= s; }
  friend Tensor operator*(const Jet<T>& s, Tensor a) { return a *= s; }
  friend Tensor operator-(Tensor a) { return a *= T{-1}; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : comps_) m = std::max(m, c.max_abs());
    return m;
  }

  /// Throws unless dimension, valence and weight agree.
  void check_compatible(const Tensor& o) const {
    if (!valid() || !o.valid()) throw StructuralError("uninitialised tensor");
    if ((rank() > 0 && o.dim_ != dim_) || o.valence_ != valence_)
      throw StructuralError("tensor shape mismatch: " + to_string(valence_) + " vs " + to_string(o.valence_));
    if (std::abs(o.weight_ - weight_) > 1e-12) throw StructuralError("tensor weight mismatch");
    if (o.jet_dim() != jet_dim()) throw StructuralError("jet dimension mismatch");
  }

 private:
  std::size_t flat_of(std::initializer_list<int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw StructuralError("wrong number of indices");
    return flatten(idx.begin(), dim_, rank());
  }

  int dim_ = 0;
  Valence valence_;
  double weight_ = 0.0;
  const JetLayout* layout_ = nullptr;
  std::vector<Jet<T>> comps_;
};

using RealTensor = Tensor<double>;
using ComplexTensor = Tensor<std::complex<double>>;

template <class T>
struct MetricPair {
  Tensor<T> g;     // g_ab, weight 2
  Tensor<T> ginv;  // g^ab, weight -2
};

namespace detail {

inline int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

template <class T>
Tensor<T> average_over_permutations(const Tensor<T>& t, std::vector<int> slots, bool signed_average) {
  for (int s : slots)
    if (s < 0 || s >= t.rank()) throw StructuralError("slot index out of range");
  for (int s : slots)
    if (t.slot(s) != t.slot(slots.front())) throw StructuralError("(anti)symmetrised slots must share variance");
  std::sort(slots.begin(), slots.end());
  if (slots.size() < 2) return t;
  const int rank = t.rank();
  const int dim = t.dim();
  std::vector<int> perm(slots.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<std::vector<int>, int>> perms;
  do {
    perms.emplace_back(perm, signed_average ? permutation_sign(perm) : 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const T inv = T{1.0 / static_cast<double>(perms.size())};
  Tensor<T> r = Tensor<T>::zeros_like(t);
  std::vector<int> idx(static_cast<std::size_t>(rank)), src(static_cast<std::size_t>(rank));
  for (std::size_t f = 0; f < t.size(); ++f) {
    unflatten(f, dim, rank, idx.data());
    for (const auto& [p, sign] : perms) {
      src = idx;
      for (std::size_t i = 0; i < slots.size(); ++i)
        src[static_cast<std::size_t>(slots[i])] = idx[static_cast<std::size_t>(slots[static_cast<std::size_t>(p[i])])];
      r[f].add_scaled(T{static_cast<double>(sign)} * inv, t.at(src.data()));
    }
  }
  return r;
}

}  // namespace detail

template <class T>
Tensor<T> symmetrize(const Tensor<T>& t, const std::vector<int>& slots) {
  return detail::average_over_permutations(t, slots, false);
}

template <class T>
Tensor<T> antisymmetrize(const Tensor<T>& t, const std::vector<int>& slots) {
  return detail::average_over_permutations(t, slots, true);
}

inline std::vector<int> slot_range(int first, int count) {
  std::vector<int> s(static_cast<std::size_t>(count));
  std::iota(s.begin(), s.end(), first);
  return s;
}

/// Reorders slots: slot i of the result is slot perm[i] of t.
template <class T>
Tensor<T> permute(const Tensor<T>& t, const std::vector<int>& perm) {
  const int rank = t.rank();
  if (static_cast<int>(perm.size()) != rank) throw StructuralError("permutation has wrong length");
  Valence v(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) v[static_cast<std::size_t>(i)] = t.slot(perm[static_cast<std::size_t>(i)]);
  Tensor<T> r(t.dim(), v, t.weight(), t.layout());
  std::vector<int> idx(static_cast<std::size_t>(rank)), src(static_cast<std::size_t>(rank));
  for (std::size_t f = 0; f < r.size(); ++f) {
    unflatten(f, t.dim(), rank, idx.data());
    for (int i = 0; i < rank; ++i) src[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = idx[static_cast<std::size_t>(i)];
    r[f] = t.at(src.data());
  }
  return r;
}

/// Two-operand index contraction in abstract-index notation, e.g.
/// einsum("rstb,ba->rsta", wbar, g). A label repeated across the inputs is
/// summed and must pair an upper with a lower slot. Weights add.
template <class T>
Tensor<T> einsum(std::string_view spec, const Tensor<T>& a, const Tensor<T>& b);

/// Single-operand form: slot permutation and/or contraction of Up/Down pairs,
/// e.g. einsum("abca->bc", t).
template <class T>
Tensor<T> einsum(std::string_view spec, const Tensor<T>& a);

/// Outer product; slots of a precede slots of b.
template <class T>
Tensor<T> outer(const Tensor<T>& a, const Tensor<T>& b);

/// Lowers slot `s` with g (weight +2) or raises it with g^-1 (weight -2).
template <class T>
Tensor<T> lower(const Tensor<T>& t, int s, const Tensor<T>& g);
template <class T>
Tensor<T> raise(const Tensor<T>& t, int s, const Tensor<T>& ginv);

/// Metric trace over slots i < j. Up/Down pairs contract directly; like
/// pairs use g or g^-1 from `metric`, shifting the weight by -/+2.
template <class T>
Tensor<T> trace(const Tensor<T>& t, int i, int j, const std::type_identity_t<MetricPair<T>>* metric);

/// t - g (g^ab t_ab) / n for a covariant symmetric 2-tensor.
template <class T>
Tensor<T> trace_free_part(const Tensor<T>& t, const MetricPair<T>& metric);

/// Projection onto the Cartan product E_{[a1..ak]} ⊠ E_b for t antisymmetric in
/// its first k slots: drops the totally antisymmetric part and, for the
/// conformal flavor, every metric trace. Slots must all be covariant.
template <class T>
Tensor<T> cartan_project(const Tensor<T>& t, int k, const std::type_identity_t<MetricPair<T>>* metric, Flavor flavor);

/// Kulkarni-Nomizu product of symmetric 2-tensors:
/// (A⊙B)_pqrs = A_pr B_qs - A_qr B_ps - A_ps B_qr + A_qs B_pr.
template <class T>
Tensor<T> kn_product(const Tensor<T>& a, const Tensor<T>& b);

/// (AB)_pr = A_(p B_r).
template <class T>
Tensor<T> sym_product(const Tensor<T>& a, const Tensor<T>& b);

/// (A∧B)_pqr = A_pr B_q - A_qr B_p.
template <class T>
Tensor<T> wedge_product(const Tensor<T>& a, const Tensor<T>& b);

/// max |a - b| over all coefficients of all components.
template <class T>
double max_abs_diff(const Tensor<T>& a, const Tensor<T>& b) {
  const int order = std::min(a.order(), b.order());
  a.check_compatible(b);
  double m = 0.0;
  const std::size_t n = a.layout().prefix_size(order);
  for (std::size_t f = 0; f < a.size(); ++f)
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, magnitude(a[f][i] - b[f][i]));
  return m;
}

/// Relative residual max|a-b| / (1 + max(|a|, |b|)).
template <class T>
double relative_residual(const Tensor<T>& a, const Tensor<T>& b) {
  return max_abs_diff(a, b) / (1.0 + std::max(a.max_abs(), b.max_abs()));
}

/// Distance of t from its antisymmetrisation over `slots`, relative to |t|.
template <class T>
double antisymmetry_defect(const Tensor<T>& t, const std::vector<int>& slots) {
  return max_abs_diff(t, antisymmetrize(t, slots)) / (1.0 + t.max_abs());
}

}  // namespace c2e

#include "c2e/tensor_impl.hpp"
