#pragma once

// Template definitions for tensor.hpp.

#include <array>
#include <map>

namespace c2e {

inline Valence valence(std::string_view spec) {
  Valence v;
  for (char c : spec) {
    if (c == 'u' || c == 'U') v.push_back(Slot::Up);
    else if (c == 'd' || c == 'D') v.push_back(Slot::Down);
    else throw StructuralError("bad valence character");
  }
  return v;
}

inline std::string to_string(const Valence& v) {
  std::string s;
  for (Slot x : v) s += x == Slot::Up ? 'u' : 'd';
  return s;
}

namespace detail {

struct LabelPlan {
  std::vector<char> labels;            // distinct labels
  std::vector<std::size_t> stride_a;   // per label
  std::vector<std::size_t> stride_b;
  std::vector<std::size_t> stride_out;
  Valence out_valence;
};

inline std::vector<std::size_t> slot_strides(int dim, int rank) {
  std::vector<std::size_t> s(static_cast<std::size_t>(rank));
  std::size_t st = 1;
  for (int i = rank - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = st;
    st *= static_cast<std::size_t>(dim);
  }
  return s;
}

// Plans an index contraction. `bval` is null for the single-operand form.
inline LabelPlan plan_einsum(std::string_view spec, int dim, const Valence& aval, const Valence* bval) {
  const auto arrow = spec.find("->");
  if (arrow == std::string_view::npos) throw StructuralError("einsum spec needs '->'");
  std::string_view lhs = spec.substr(0, arrow);
  std::string_view out = spec.substr(arrow + 2);
  std::string_view as = lhs, bs;
  const auto comma = lhs.find(',');
  if (bval != nullptr) {
    if (comma == std::string_view::npos) throw StructuralError("einsum spec needs two operands");
    as = lhs.substr(0, comma);
    bs = lhs.substr(comma + 1);
  } else if (comma != std::string_view::npos) {
    throw StructuralError("einsum spec has two operands but one tensor");
  }
  if (as.size() != aval.size() || (bval != nullptr && bs.size() != bval->size()))
    throw StructuralError("einsum spec does not match tensor ranks");

  struct Use {
    int count = 0;
    int ups = 0;
    int downs = 0;
  };
  std::map<char, Use> uses;
  std::vector<char> order;
  auto note = [&](char c, Slot s) {
    auto& u = uses[c];
    if (u.count == 0) order.push_back(c);
    ++u.count;
    (s == Slot::Up ? u.ups : u.downs)++;
  };
  for (std::size_t i = 0; i < as.size(); ++i) note(as[i], aval[i]);
  if (bval != nullptr)
    for (std::size_t i = 0; i < bs.size(); ++i) note(bs[i], (*bval)[i]);

  LabelPlan p;
  p.labels = order;
  const auto sa = slot_strides(dim, static_cast<int>(as.size()));
  const auto sb = slot_strides(dim, static_cast<int>(bs.size()));
  const auto so = slot_strides(dim, static_cast<int>(out.size()));
  for (char c : order) {
    const auto& u = uses[c];
    const bool in_out = out.find(c) != std::string_view::npos;
    if (u.count > 2) throw StructuralError(std::string("einsum label used more than twice: ") + c);
    if (u.count == 2 && !(u.ups == 1 && u.downs == 1))
      throw StructuralError(std::string("contraction must pair an upper and a lower index: ") + c);
    if (u.count == 2 && in_out) throw StructuralError(std::string("contracted label in output: ") + c);
    if (u.count == 1 && !in_out) throw StructuralError(std::string("free label missing from output: ") + c);
    std::size_t a = 0, b = 0, o = 0;
    for (std::size_t i = 0; i < as.size(); ++i)
      if (as[i] == c) a += sa[i];
    for (std::size_t i = 0; i < bs.size(); ++i)
      if (bs[i] == c) b += sb[i];
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i] == c) o += so[i];
    p.stride_a.push_back(a);
    p.stride_b.push_back(b);
    p.stride_out.push_back(o);
  }
  for (char c : out) {
    if (uses.find(c) == uses.end()) throw StructuralError(std::string("output label not in inputs: ") + c);
    if (std::count(out.begin(), out.end(), c) != 1) throw StructuralError("repeated output label");
    const auto pa = as.find(c);
    p.out_valence.push_back(pa != std::string_view::npos ? aval[pa] : (*bval)[bs.find(c)]);
  }
  return p;
}

// Calls f(ia, ib, io) for every assignment of values to the plan's labels.
template <class F>
void for_each_assignment(const LabelPlan& p, int dim, F&& f) {
  const std::size_t L = p.labels.size();
  std::vector<int> v(L, 0);
  std::size_t ia = 0, ib = 0, io = 0;
  while (true) {
    f(ia, ib, io);
    std::size_t k = L;
    while (k > 0) {
      --k;
      if (v[k] + 1 < dim) {
        ++v[k];
        ia += p.stride_a[k];
        ib += p.stride_b[k];
        io += p.stride_out[k];
        break;
      }
      ia -= p.stride_a[k] * static_cast<std::size_t>(v[k]);
      ib -= p.stride_b[k] * static_cast<std::size_t>(v[k]);
      io -= p.stride_out[k] * static_cast<std::size_t>(v[k]);
      v[k] = 0;
      if (k == 0) return;
    }
    if (L == 0) return;
  }
}

}  // namespace detail

template <class T>
Tensor<T> einsum(std::string_view spec, const Tensor<T>& a, const Tensor<T>& b) {
  if (a.dim() != b.dim() && a.rank() > 0 && b.rank() > 0) throw StructuralError("einsum dimension mismatch");
  if (a.jet_dim() != b.jet_dim()) throw StructuralError("jet dimension mismatch");
  const int dim = a.rank() > 0 ? a.dim() : b.dim();
  const auto plan = detail::plan_einsum(spec, dim, a.valence(), &b.valence());
  const JetLayout& l = a.order() <= b.order() ? a.layout() : b.layout();
  Tensor<T> r(dim, plan.out_valence, a.weight() + b.weight(), l);
  detail::for_each_assignment(plan, dim, [&](std::size_t ia, std::size_t ib, std::size_t io) {
    r[io].add_product(a[ia], b[ib]);
  });
  return r;
}

template <class T>
Tensor<T> einsum(std::string_view spec, const Tensor<T>& a) {
  const auto plan = detail::plan_einsum(spec, a.dim(), a.valence(), nullptr);
  Tensor<T> r(a.dim(), plan.out_valence, a.weight(), a.layout());
  detail::for_each_assignment(plan, a.dim(), [&](std::size_t ia, std::size_t, std::size_t io) { r[io] += a[ia]; });
  return r;
}

template <class T>
Tensor<T> outer(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.jet_dim() != b.jet_dim()) throw StructuralError("jet dimension mismatch");
  if (a.rank() > 0 && b.rank() > 0 && a.dim() != b.dim()) throw StructuralError("outer dimension mismatch");
  const int dim = a.rank() > 0 ? a.dim() : b.dim();
  Valence v = a.valence();
  v.insert(v.end(), b.valence().begin(), b.valence().end());
  const JetLayout& l = a.order() <= b.order() ? a.layout() : b.layout();
  Tensor<T> r(dim, v, a.weight() + b.weight(), l);
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < nb; ++j) r[i * nb + j].add_product(a[i], b[j]);
  return r;
}

namespace detail {

// r_{..s..} = sum_e m(s, e) t_{..e..} with the new slot variance `slot`.
template <class T>
Tensor<T> contract_slot(const Tensor<T>& t, int s, const Tensor<T>& m, Slot slot) {
  if (s < 0 || s >= t.rank()) throw StructuralError("slot index out of range");
  if (m.rank() != 2 || m.dim() != t.dim()) throw StructuralError("metric shape mismatch");
  Valence v = t.valence();
  v[static_cast<std::size_t>(s)] = slot;
  const JetLayout& l = t.order() <= m.order() ? t.layout() : m.layout();
  Tensor<T> r(t.dim(), v, t.weight() + m.weight(), l);
  const int rank = t.rank();
  const int dim = t.dim();
  const auto strides = slot_strides(dim, rank);
  const std::size_t st = strides[static_cast<std::size_t>(s)];
  std::vector<int> idx(static_cast<std::size_t>(rank));
  for (std::size_t f = 0; f < r.size(); ++f) {
    unflatten(f, dim, rank, idx.data());
    const int i = idx[static_cast<std::size_t>(s)];
    const std::size_t base = f - st * static_cast<std::size_t>(i);
    for (int e = 0; e < dim; ++e)
      r[f].add_product(m[static_cast<std::size_t>(i * dim + e)], t[base + st * static_cast<std::size_t>(e)]);
  }
  return r;
}

}  // namespace detail

template <class T>
Tensor<T> lower(const Tensor<T>& t, int s, const Tensor<T>& g) {
  if (t.slot(s) != Slot::Up) throw StructuralError("lowering a slot that is not upper");
  if (g.valence() != valence("dd")) throw StructuralError("lowering needs g_ab");
  return detail::contract_slot(t, s, g, Slot::Down);
}

template <class T>
Tensor<T> raise(const Tensor<T>& t, int s, const Tensor<T>& ginv) {
  if (t.slot(s) != Slot::Down) throw StructuralError("raising a slot that is not lower");
  if (ginv.valence() != valence("uu")) throw StructuralError("raising needs g^ab");
  return detail::contract_slot(t, s, ginv, Slot::Up);
}

template <class T>
Tensor<T> trace(const Tensor<T>& t, int i, int j, const std::type_identity_t<MetricPair<T>>* metric) {
  if (i == j || i < 0 || j < 0 || i >= t.rank() || j >= t.rank()) throw StructuralError("bad trace slots");
  if (i > j) std::swap(i, j);
  Tensor<T> u = t;
  if (t.slot(i) == t.slot(j)) {
    if (metric == nullptr) throw StructuralError("trace over like slots needs a metric");
    u = t.slot(i) == Slot::Down ? raise(t, i, metric->ginv) : lower(t, i, metric->g);
  }
  const int rank = u.rank();
  const int dim = u.dim();
  Valence v;
  for (int s = 0; s < rank; ++s)
    if (s != i && s != j) v.push_back(u.slot(s));
  Tensor<T> r(dim, v, u.weight(), u.layout());
  if (v.empty()) r = Tensor<T>(1, {}, u.weight(), u.layout());
  std::vector<int> idx(static_cast<std::size_t>(rank)), ridx(static_cast<std::size_t>(rank));
  for (std::size_t f = 0; f < r.size(); ++f) {
    unflatten(f, dim, rank - 2, ridx.data());
    int p = 0;
    for (int s = 0; s < rank; ++s)
      if (s != i && s != j) idx[static_cast<std::size_t>(s)] = ridx[static_cast<std::size_t>(p++)];
    for (int e = 0; e < dim; ++e) {
      idx[static_cast<std::size_t>(i)] = e;
      idx[static_cast<std::size_t>(j)] = e;
      r[f] += u.at(idx.data());
    }
  }
  return r;
}

template <class T>
Tensor<T> trace_free_part(const Tensor<T>& t, const MetricPair<T>& metric) {
  if (t.valence() != valence("dd")) throw StructuralError("trace_free_part needs a covariant 2-tensor");
  const Tensor<T> tr = trace(t, 0, 1, &metric);
  Tensor<T> corr = metric.g * tr.value();
  corr.set_weight(t.weight());
  corr *= T{1.0 / t.dim()};
  return t - corr;
}

template <class T>
Tensor<T> cartan_project(const Tensor<T>& t, int k, const std::type_identity_t<MetricPair<T>>* metric, Flavor flavor) {
  if (t.rank() != k + 1 || k < 1) throw StructuralError("cartan_project needs k antisymmetric slots plus one");
  for (Slot s : t.valence())
    if (s != Slot::Down) throw StructuralError("cartan_project needs covariant slots");
  if (k >= 2 && antisymmetry_defect(t, slot_range(0, k)) > 1e-9)
    throw StructuralError("input is not antisymmetric in its first slots");
  Tensor<T> tp = t - antisymmetrize(t, slot_range(0, k + 1));
  if (flavor == Flavor::Projective) return tp;
  if (metric == nullptr) throw StructuralError("conformal projection needs a metric");
  const int n = t.dim();
  // s = g^{a1 b} t'_{a1 a2..ak b}, a (k-1)-form.
  const Tensor<T> s = trace(tp, 0, k, metric);
  // X(s)_{a1..ak b} = sum_i (-1)^(i-1) g_{a_i b} s_{a1..^ai..ak}
  Tensor<T> x = Tensor<T>::zeros_like(tp);
  x = x.truncated(std::min(s.order(), metric->g.order()));
  const int rank = k + 1;
  std::vector<int> idx(static_cast<std::size_t>(rank)), rest(static_cast<std::size_t>(std::max(k - 1, 1)));
  for (std::size_t f = 0; f < x.size(); ++f) {
    unflatten(f, n, rank, idx.data());
    const int b = idx[static_cast<std::size_t>(k)];
    for (int i = 0; i < k; ++i) {
      int p = 0;
      for (int j = 0; j < k; ++j)
        if (j != i) rest[static_cast<std::size_t>(p++)] = idx[static_cast<std::size_t>(j)];
      const Jet<T>& sv = k == 1 ? s.value() : s.at(rest.data());
      const Jet<T>& gv = metric->g.at({idx[static_cast<std::size_t>(i)], b});
      Jet<T> term = gv * sv;
      if (i % 2 == 1) term = -term;
      x[f] += term;
    }
  }
  x *= T{1.0 / static_cast<double>(n - k + 1)};
  return tp - x;
}

template <class T>
Tensor<T> kn_product(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.valence() != valence("dd") || b.valence() != valence("dd")) throw StructuralError("kn_product needs covariant 2-tensors");
  const Tensor<T> ab = outer(a, b);  // A_pr B_qs at [p r q s]
  // A_pr B_qs - A_qr B_ps - A_ps B_qr + A_qs B_pr
  Tensor<T> r = permute(ab, {0, 2, 1, 3});
  r -= permute(ab, {2, 0, 1, 3});
  r -= permute(ab, {0, 2, 3, 1});
  r += permute(ab, {2, 0, 3, 1});
  return r;
}

template <class T>
Tensor<T> sym_product(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.rank() != 1 || b.rank() != 1) throw StructuralError("sym_product needs 1-tensors");
  if (a.slot(0) != b.slot(0)) throw StructuralError("sym_product needs matching variance");
  return symmetrize(outer(a, b), {0, 1});
}

template <class T>
Tensor<T> wedge_product(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.valence() != valence("dd") || b.valence() != valence("d")) throw StructuralError("wedge_product needs A_ab and B_c");
  const Tensor<T> ab = outer(a, b);  // [p r q]
  // A_pr B_q - A_qr B_p: result slot order (p q r)
  Tensor<T> r = permute(ab, {0, 2, 1});
  r -= permute(ab, {2, 0, 1});
  return r;
}

}  // namespace c2e
