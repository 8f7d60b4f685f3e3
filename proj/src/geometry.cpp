#include "c2e/geometry.hpp"

#include <random>

namespace c2e {

RealTensor MetricChart::metric(std::span<const double> point, int order) const {
  if (static_cast<int>(point.size()) != dim) throw StructuralError("point dimension does not match chart " + name);
  const Coordinates x = coordinate_jets(point, order);
  const std::vector<RealJet> comps = components(x);
  if (static_cast<int>(comps.size()) != dim * dim) throw StructuralError("chart returned the wrong number of components");
  RealTensor g(dim, valence("dd"), 2.0, jet_layout(dim, order));
  for (std::size_t i = 0; i < comps.size(); ++i) g[i] = comps[i].truncated(order);
  return g;
}

RealJet Polynomial::operator()(const Coordinates& x) const {
  RealJet sum(x.front().layout());
  for (const auto& t : terms) {
    RealJet mono = RealJet::constant(x.front().dim(), x.front().order(), t.coef);
    for (std::size_t v = 0; v < t.powers.size(); ++v)
      for (int p = 0; p < t.powers[v]; ++p) mono = mono * x[v];
    sum += mono;
  }
  return sum;
}

namespace {

void monomials(int dim, int max_degree, int var, std::vector<int>& cur, int used, std::vector<std::vector<int>>& out) {
  if (var == dim) {
    out.push_back(cur);
    return;
  }
  for (int p = 0; p + used <= max_degree; ++p) {
    cur[static_cast<std::size_t>(var)] = p;
    monomials(dim, max_degree, var + 1, cur, used + p, out);
  }
  cur[static_cast<std::size_t>(var)] = 0;
}

}  // namespace

Polynomial Polynomial::random(int dim, int max_degree, double amplitude, std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x9e37u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  std::vector<std::vector<int>> mons;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  monomials(dim, max_degree, 0, cur, 0, mons);
  Polynomial p;
  for (auto& m : mons) p.terms.push_back({m, u(rng)});
  return p;
}

MetricPair<double> metric_pair(const RealTensor& g) {
  const int n = g.dim();
  JetMatrix m(n, n, g.layout());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g.at({i, j});
  JetMatrix inv;
  try {
    inv = inverse(m);
  } catch (const NumericError&) {
    throw NumericError("degenerate metric at sample point");
  }
  RealTensor ginv(n, valence("uu"), -2.0, g.layout());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ginv.at({i, j}) = inv(i, j);
  // symmetrise away roundoff
  return {g, symmetrize(ginv, {0, 1})};
}

RealTensor partial_derivative(const RealTensor& t) {
  if (t.order() < 1) throw BudgetError("derivative budget exhausted");
  Valence v{Slot::Down};
  v.insert(v.end(), t.valence().begin(), t.valence().end());
  const int n = t.rank() == 0 ? t.jet_dim() : t.dim();
  RealTensor r(n, v, t.weight(), t.layout().truncated(t.order() - 1));
  const std::size_t sz = t.size();
  for (int x = 0; x < n; ++x)
    for (std::size_t f = 0; f < sz; ++f) r[static_cast<std::size_t>(x) * sz + f] = t[f].partial(x);
  return r;
}

RealTensor covariant_derivative(const RealTensor& t, const RealTensor& gamma) {
  RealTensor r = partial_derivative(t);
  if (gamma.order() < r.order()) r = r.truncated(gamma.order());
  const int n = gamma.dim();
  const int rank = t.rank();
  if (rank == 0) return r;
  const auto strides = detail::slot_strides(n, rank);
  const std::size_t sz = t.size();
  std::vector<int> idx(static_cast<std::size_t>(rank));
  for (int x = 0; x < n; ++x) {
    for (std::size_t f = 0; f < sz; ++f) {
      unflatten(f, n, rank, idx.data());
      RealJet& out = r[static_cast<std::size_t>(x) * sz + f];
      for (int s = 0; s < rank; ++s) {
        const int i = idx[static_cast<std::size_t>(s)];
        const std::size_t st = strides[static_cast<std::size_t>(s)];
        const std::size_t base = f - st * static_cast<std::size_t>(i);
        for (int e = 0; e < n; ++e) {
          const RealJet& te = t[base + st * static_cast<std::size_t>(e)];
          if (t.slot(s) == Slot::Up) {
            out.add_product(gamma.at({i, x, e}), te);
          } else {
            RealJet tmp(out.layout());
            tmp.add_product(gamma.at({e, x, i}), te);
            out -= tmp;
          }
        }
      }
    }
  }
  return r;
}

RealTensor christoffel(const MetricPair<double>& metric) {
  const RealTensor dg = partial_derivative(metric.g);  // [c a b] = ∂_c g_ab
  RealTensor low = permute(dg, {1, 0, 2}) + permute(dg, {1, 2, 0}) - dg;
  low *= 0.5;
  return raise(low, 0, metric.ginv);
}

RealTensor riemann_from_christoffel(const RealTensor& gamma) {
  const RealTensor dgam = partial_derivative(gamma);  // [a c b d] = ∂_a Γ^c_bd
  RealTensor r = permute(dgam, {0, 2, 1, 3}) - permute(dgam, {2, 0, 1, 3});
  r += einsum("cae,ebd->abcd", gamma, gamma);
  r -= einsum("cbe,ead->abcd", gamma, gamma);
  return r;
}

RealTensor cotton_from_schouten(const RealTensor& schouten, const RealTensor& gamma) {
  const RealTensor dp = covariant_derivative(schouten, gamma);  // [x y z] = ∇_x P_yz
  return permute(dp, {2, 0, 1}) - permute(dp, {2, 1, 0});
}

RealTensor weyl_tensor(const CurvaturePack& pack) {
  return pack.riemann_down - kn_product(pack.metric.g, pack.schouten);
}

namespace {

RealTensor volume_form(const MetricPair<double>& metric) {
  const int n = metric.g.dim();
  JetMatrix m(n, n, metric.g.layout());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = metric.g.at({i, j});
  RealJet det = determinant(m);
  if (det.value() < 0) det = -det;
  const RealJet root = sqrt(det);
  RealTensor eps(n, Valence(static_cast<std::size_t>(n), Slot::Down), static_cast<double>(n), metric.g.layout());
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  do {
    RealJet& c = eps.at(perm.data());
    c = detail::permutation_sign(perm) > 0 ? root : -root;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return eps;
}

}  // namespace

CurvaturePack curvature_pack_from_metric(const RealTensor& g, const PackOptions& opts) {
  CurvaturePack p;
  p.dim = g.dim();
  p.metric_order = g.order();
  if (p.dim < 3) throw PreconditionError("conformal curvature pipeline needs dimension >= 3");
  if (g.order() < 3) throw BudgetError("derivative budget exhausted: the Cotton tensor needs metric order >= 3");
  const int n = p.dim;
  p.metric = metric_pair(g);
  p.gamma = christoffel(p.metric);
  p.riemann = riemann_from_christoffel(p.gamma);
  p.ricci = einsum("abad->bd", p.riemann);
  p.scalar = einsum("bd,bd->", p.metric.ginv, p.ricci);
  p.J = p.scalar * (1.0 / (2.0 * (n - 1)));
  p.schouten = (p.ricci - outer(p.J, p.metric.g)) * (1.0 / (n - 2));
  p.cotton = cotton_from_schouten(p.schouten, p.gamma);
  p.riemann_down = lower(p.riemann, 2, p.metric.g);
  p.weyl = weyl_tensor(p);
  p.weyl_mixed = raise(p.weyl, 2, p.metric.ginv);
  p.volume = volume_form(p.metric);
  if (opts.check_invariants) {
    for (const auto& [name, res] : curvature_invariants(p))
      if (res > opts.invariant_tol) throw NumericError("curvature invariant violated: " + name);
  }
  return p;
}

CurvaturePack curvature_pack(const MetricChart& chart, std::span<const double> point, int metric_order,
                             const PackOptions& opts) {
  return curvature_pack_from_metric(chart.metric(point, metric_order), opts);
}

std::vector<std::pair<std::string, double>> curvature_invariants(const CurvaturePack& p) {
  std::vector<std::pair<std::string, double>> out;
  const RealTensor& rd = p.riemann_down;
  const double scale = 1.0 + rd.max_abs();
  auto rel = [&](const RealTensor& a, const RealTensor& b) { return max_abs_diff(a, b) / scale; };
  out.emplace_back("ricci symmetric", rel(p.ricci, permute(p.ricci, {1, 0})) );
  out.emplace_back("riemann antisymmetric in first pair", rel(rd, -permute(rd, {1, 0, 2, 3})));
  out.emplace_back("riemann antisymmetric in second pair", rel(rd, -permute(rd, {0, 1, 3, 2})));
  out.emplace_back("riemann pair symmetry", rel(rd, permute(rd, {2, 3, 0, 1})));
  out.emplace_back("first bianchi identity", antisymmetrize(p.riemann, {0, 1, 3}).max_abs() / scale);
  const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  double tr = 0.0;
  for (auto [i, j] : pairs) tr = std::max(tr, trace(p.weyl, i, j, &p.metric).max_abs());
  out.emplace_back("weyl trace-free", tr / scale);
  return out;
}

ConformalScale random_scale(int dim, std::uint64_t seed) {
  Polynomial poly = Polynomial::random(dim, 3, 0.15, seed, 0x5ca1e);
  return {"random-scale:" + std::to_string(seed), [poly](const Coordinates& x) { return poly(x); }};
}

MetricChart conformal_rescale(const MetricChart& chart, const ConformalScale& scale) {
  MetricChart r = chart;
  r.name = chart.name + "*" + scale.name;
  MetricFn base = chart.components;
  ScalarFn ups = scale.upsilon;
  r.components = [base, ups](const Coordinates& x) {
    std::vector<RealJet> c = base(x);
    const RealJet f = exp(ups(x) * 2.0);
    for (auto& v : c) v = v * f;
    return c;
  };
  return r;
}

RealTensor transform_density(const RealTensor& t, const RealJet& upsilon, double w) {
  if (w == 0.0) return t;
  return t * exp(upsilon * w);
}

RealJet scale_jet(const ConformalScale& scale, std::span<const double> point, int order) {
  return scale.upsilon(coordinate_jets(point, order));
}

RealTensor scale_gradient(const RealJet& upsilon) {
  return partial_derivative(RealTensor::scalar(upsilon, 0.0));
}

}  // namespace c2e
