#pragma once

// Truncated multivariate Taylor expansions ("jets") at a base point.
//
// A jet of order N in `dim` variables stores one coefficient per multi-index
// alpha with |alpha| <= N. Coefficients are Taylor coefficients, not
// derivatives: the jet of f at p is sum_alpha c_alpha h^alpha with
// c_alpha = d^alpha f(p) / alpha!.
//
// Coefficients are laid out densely in graded order (by total degree, then
// lexicographically), so the order-M layout is a prefix of the order-N layout
// for M <= N. Truncation is therefore a prefix copy.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "c2e/errors.hpp"

namespace c2e {

inline constexpr int kMaxJetDim = 8;
using MultiIndex = std::array<std::uint8_t, kMaxJetDim>;

class JetLayout {
 public:
  struct ProductTerm {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };
  struct Shift {
    std::uint32_t source;
    double factor;
  };

  JetLayout(int dim, int order, const JetLayout* lower);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return alphas_.size(); }
  const MultiIndex& alpha(std::size_t i) const { return alphas_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  std::size_t index_of(const MultiIndex& alpha) const;

  /// Number of coefficients of the order-`m` prefix.
  std::size_t prefix_size(int m) const { return prefix_sizes_[static_cast<std::size_t>(m)]; }

  /// All (i, j, k) with alpha_i + alpha_j = alpha_k inside this layout.
  const std::vector<ProductTerm>& product_terms() const { return products_; }

  /// Entry t of partial_map(v) gives the coefficient of this layout feeding
  /// coefficient t of the order-1 lower layout under d/dx_v.
  const std::vector<Shift>& partial_map(int var) const { return partials_[static_cast<std::size_t>(var)]; }

  const JetLayout& truncated(int order) const;

 private:
  int dim_;
  int order_;
  std::vector<MultiIndex> alphas_;
  std::vector<int> degrees_;
  std::vector<std::size_t> prefix_sizes_;
  std::vector<ProductTerm> products_;
  std::vector<std::vector<Shift>> partials_;
  std::vector<const JetLayout*> chain_;  // chain_[m] is the order-m layout
};

/// Shared layout for (dim, order). Thread safe; the reference stays valid for
/// the lifetime of the program.
const JetLayout& jet_layout(int dim, int order);

template <class T>
double magnitude(const T& x) {
  return std::abs(x);
}

template <class T>
class Jet {
 public:
  using value_type = T;

  Jet() = default;
  explicit Jet(const JetLayout& layout) : layout_(&layout), c_(layout.size(), T{}) {}

  static Jet constant(int dim, int order, T value) {
    Jet j(jet_layout(dim, order));
    j.c_[0] = value;
    return j;
  }

  /// The coordinate function x_var expanded at a base point whose var-th
  /// coordinate is `base`.
  static Jet variable(int dim, int order, int var, T base) {
    if (var < 0 || var >= dim) throw StructuralError("jet variable index out of range");
    Jet j(jet_layout(dim, order));
    j.c_[0] = base;
    if (order >= 1) {
      MultiIndex a{};
      a[static_cast<std::size_t>(var)] = 1;
      j.c_[j.layout_->index_of(a)] = T{1};
    }
    return j;
  }

  bool valid() const { return layout_ != nullptr; }
  int dim() const { return layout_->dim(); }
  int order() const { return layout_->order(); }
  const JetLayout& layout() const { return *layout_; }
  std::size_t size() const { return c_.size(); }

  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  std::span<const T> coefficients() const { return c_; }
  std::span<T> coefficients() { return c_; }
  T coefficient(const MultiIndex& alpha) const { return c_[layout_->index_of(alpha)]; }
  T value() const { return c_[0]; }

  Jet truncated(int order) const {
    if (order > this->order()) throw StructuralError("cannot raise the order of a jet");
    if (order == this->order()) return *this;
    Jet r(layout_->truncated(order));
    std::copy(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(r.size()), r.c_.begin());
    return r;
  }

  Jet& operator+=(const Jet& o) {
    check_dim(o);
    if (o.order() < order()) *this = truncated(o.order());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_dim(o);
    if (o.order() < order()) *this = truncated(o.order());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator+=(const T& s) {
    c_[0] += s;
    return *this;
  }

  /// *this += a * b. The accumulator keeps its own order, which must not
  /// exceed the order of either factor.
  void add_product(const Jet& a, const Jet& b) {
    check_dim(a);
    check_dim(b);
    if (a.order() < order() || b.order() < order())
      throw StructuralError("accumulator order exceeds factor order");
    for (const auto& t : layout_->product_terms()) c_[t.out] += a.c_[t.lhs] * b.c_[t.rhs];
  }

  /// *this += s * a for a scalar s.
  void add_scaled(const T& s, const Jet& a) {
    check_dim(a);
    if (a.order() < order()) throw StructuralError("accumulator order exceeds operand order");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += s * a.c_[i];
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_dim(b);
    const JetLayout& l = a.order() <= b.order() ? *a.layout_ : *b.layout_;
    Jet r(l);
    for (const auto& t : l.product_terms()) r.c_[t.out] += a.c_[t.lhs] * b.c_[t.rhs];
    return r;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const T& s) { return a *= s; }
  friend Jet operator*(const T& s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, const T& s) { return a += s; }
  friend Jet operator+(const T& s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, const T& s) { return a += -s; }
  friend Jet operator-(const T& s, const Jet& a) { return -a + s; }
  friend Jet operator-(Jet a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }

  /// Formal partial derivative; the result has order one less.
  Jet partial(int var) const {
    if (var < 0 || var >= dim()) throw StructuralError("partial derivative index out of range");
    if (order() == 0) throw BudgetError("derivative budget exhausted");
    Jet r(layout_->truncated(order() - 1));
    const auto& map = layout_->partial_map(var);
    for (std::size_t t = 0; t < r.size(); ++t) r.c_[t] = map[t].factor * c_[map[t].source];
    return r;
  }

  /// Evaluates the truncated polynomial at offset h from the base point.
  T eval(std::span<const double> h) const {
    T sum{};
    for (std::size_t i = 0; i < c_.size(); ++i) {
      double mono = 1.0;
      const auto& a = layout_->alpha(i);
      for (int v = 0; v < dim(); ++v)
        for (int p = 0; p < a[static_cast<std::size_t>(v)]; ++p) mono *= h[static_cast<std::size_t>(v)];
      sum += c_[i] * mono;
    }
    return sum;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, magnitude(x));
    return m;
  }

 private:
  void check_dim(const Jet& o) const {
    if (layout_ == nullptr || o.layout_ == nullptr) throw StructuralError("uninitialised jet");
    if (o.dim() != dim()) throw StructuralError("jet dimension mismatch");
  }

  const JetLayout* layout_ = nullptr;
  std::vector<T> c_;
};

using RealJet = Jet<double>;
using ComplexJet = Jet<std::complex<double>>;

enum class Elementary { Exp, Log, Sin, Cos, Pow, Reciprocal };

/// Taylor composition f(a), truncated at a.order(). `exponent` is used by Pow.
RealJet apply(Elementary f, const RealJet& a, double exponent = 0.0);

inline RealJet exp(const RealJet& a) { return apply(Elementary::Exp, a); }
inline RealJet log(const RealJet& a) { return apply(Elementary::Log, a); }
inline RealJet sin(const RealJet& a) { return apply(Elementary::Sin, a); }
inline RealJet cos(const RealJet& a) { return apply(Elementary::Cos, a); }
inline RealJet pow(const RealJet& a, double r) { return apply(Elementary::Pow, a, r); }
inline RealJet sqrt(const RealJet& a) { return apply(Elementary::Pow, a, 0.5); }
inline RealJet reciprocal(const RealJet& a) { return apply(Elementary::Reciprocal, a); }
inline RealJet operator/(const RealJet& a, const RealJet& b) { return a * reciprocal(b); }

/// Coordinate jets x_i = point_i + h_i.
std::vector<RealJet> coordinate_jets(std::span<const double> point, int order);

}  // namespace c2e
