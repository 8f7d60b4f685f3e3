#include "c2e/conformal.hpp"

#include <cmath>

namespace c2e {

const char* to_string(InversionMethod m) {
  switch (m) {
    case InversionMethod::None: return "none";
    case InversionMethod::PreferredV: return "preferred-V";
    case InversionMethod::LeastSquares: return "least-squares";
  }
  return "?";
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::OneSolutionCandidate: return "one-solution-candidate";
    case Classification::NoSolution: return "no-solution";
    case Classification::NotGeneric: return "not-generic";
  }
  return "?";
}

namespace {

RealTensor raise_all(RealTensor t, const RealTensor& ginv) {
  for (int s = 0; s < t.rank(); ++s)
    if (t.slot(s) == Slot::Down) t = raise(t, s, ginv);
  return t;
}

// Rows (a,b,c), column d: A = W_{abcd}.
JetMatrix contraction_matrix(const RealTensor& w) {
  const int n = w.dim();
  JetMatrix a(n * n * n, n, w.layout());
  for (std::size_t f = 0; f < w.size(); ++f)
    a(static_cast<int>(f / static_cast<std::size_t>(n)), static_cast<int>(f % static_cast<std::size_t>(n))) = w[f];
  return a;
}

// Applies the g-self-adjoint Cartan projection to the first three slots of an
// upper tensor X^{abce}, separately for each e.
RealTensor project_upper_hook(const RealTensor& x, const MetricPair<double>& metric) {
  const int n = x.dim();
  RealTensor low = lower(lower(lower(x, 0, metric.g), 1, metric.g), 2, metric.g);
  RealTensor out = RealTensor::zeros_like(low);
  for (int e = 0; e < n; ++e) {
    RealTensor slice(n, valence("ddd"), low.weight(), low.layout());
    for (std::size_t f = 0; f < slice.size(); ++f) slice[f] = low[f * static_cast<std::size_t>(n) + static_cast<std::size_t>(e)];
    slice = antisymmetrize(slice, {0, 1});
    const RealTensor p = cartan_project(slice, 2, &metric, Flavor::Conformal);
    for (std::size_t f = 0; f < p.size(); ++f) out[f * static_cast<std::size_t>(n) + static_cast<std::size_t>(e)] = p[f];
  }
  out = out.truncated(std::min(out.order(), metric.g.order()));
  return raise(raise(raise(out, 0, metric.ginv), 1, metric.ginv), 2, metric.ginv);
}

RealTensor with_scalar(const RealTensor& t, const RealTensor& sigma) { return outer(t, sigma); }

}  // namespace

GenericityReport weyl_inversion(const CurvaturePack& pack, InversionRoute route) {
  GenericityReport r;
  const int n = pack.dim;
  const JetMatrix a = contraction_matrix(pack.weyl);
  r.rank = numerical_rank(a);
  const Eigen::VectorXd sv = singular_values(a);
  r.smallest_singular = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
  r.generic = r.rank == n;

  const RealTensor wup = raise_all(pack.weyl, pack.metric.ginv);
  const RealTensor v = einsum("cdea,cdeb->ab", pack.weyl, wup);  // V_a^b
  JetMatrix vm(n, n, v.layout());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) vm(i, j) = v.at({i, j});
  const Eigen::MatrixXd v0 = vm.constant_term();
  r.det_v = v0.determinant();
  const double norm = v0.norm();
  r.det_v_ratio = norm > 0 ? std::abs(r.det_v) / std::pow(norm, n) : 0.0;
  if (!r.generic) return r;

  bool preferred = r.det_v_ratio > kPreferredInversionThreshold;
  if (route == InversionRoute::PreferredV) {
    if (!preferred) throw NumericError("preferred Weyl inversion requested but det V vanishes");
  } else if (route == InversionRoute::LeastSquares) {
    preferred = false;
  }

  if (preferred) {
    const JetMatrix vinv = inverse(vm);
    RealTensor vbar(n, valence("du"), -v.weight(), vinv.layout());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) vbar.at({i, j}) = vinv(i, j);
    r.wbar = einsum("abce,ed->abcd", wup, vbar);
    r.method = InversionMethod::PreferredV;
  } else {
    const JetMatrix l = least_squares_left_inverse(a);  // n x n^3
    RealTensor x(n, valence("uuuu"), -pack.weyl.weight(), l.layout());
    for (int e = 0; e < n; ++e)
      for (int row = 0; row < n * n * n; ++row) x[static_cast<std::size_t>(row * n + e)] = l(e, row);
    r.wbar = project_upper_hook(x, pack.metric);
    r.method = InversionMethod::LeastSquares;
  }

  const RealTensor id = einsum("abce,abcd->ed", r.wbar, pack.weyl);
  double res = 0.0;
  for (int e = 0; e < n; ++e)
    for (int d = 0; d < n; ++d) {
      RealJet diff = id.at({e, d});
      if (e == d) diff += -1.0;
      res = std::max(res, diff.max_abs());
    }
  r.left_inverse_residual = res;
  return r;
}

RealTensor wbar_contract(const RealTensor& wbar, const RealTensor& x, const MetricPair<double>& metric) {
  return lower(einsum("rstb,rst->b", wbar, x), 0, metric.g);
}

ObstructionPack obstruction_pack(const CurvaturePack& pack, const GenericityReport& report) {
  if (!report.generic) throw PreconditionError("not generic: the Weyl contraction map is not injective");
  ObstructionPack o;
  const auto& m = pack.metric;
  o.Z = lower(einsum("rstb,trs->b", report.wbar, pack.cotton), 0, m.g);
  const RealTensor dz = covariant_derivative(o.Z, pack.gamma);
  o.dZ = dz - permute(dz, {1, 0});
  const RealTensor zz = outer(o.Z, o.Z);
  o.Phi = trace_free_part(symmetrize(dz, {0, 1}), m) - trace_free_part(pack.schouten, m) - trace_free_part(zz, m);

  double z2 = 0.0;
  for (std::size_t i = 0; i < o.Z.size(); ++i) z2 += o.Z[i].value() * o.Z[i].value();
  double pmax = 0.0, dzmax = 0.0, phimax = 0.0;
  for (std::size_t i = 0; i < pack.schouten.size(); ++i) pmax = std::max(pmax, std::abs(pack.schouten[i].value()));
  for (std::size_t i = 0; i < o.dZ.size(); ++i) dzmax = std::max(dzmax, std::abs(o.dZ[i].value()));
  for (std::size_t i = 0; i < o.Phi.size(); ++i) phimax = std::max(phimax, std::abs(o.Phi[i].value()));
  o.obstruction = std::max(dzmax, phimax);
  o.scale = 1.0 + pmax + z2;
  o.classification = o.obstruction <= kOneSolutionTolerance * o.scale ? Classification::OneSolutionCandidate
                                                                       : Classification::NoSolution;
  return o;
}

const RealTensor& ConformalGeometry::Z() const {
  if (!obstruction) throw PreconditionError("not generic: Z is undefined");
  return obstruction->Z;
}

const RealTensor& ConformalGeometry::wbar() const {
  if (!inversion.generic) throw PreconditionError("not generic: no Weyl inverse");
  return inversion.wbar;
}

ConformalGeometry conformal_geometry(CurvaturePack pack, InversionRoute route) {
  ConformalGeometry g;
  g.pack = std::move(pack);
  if (g.pack.dim >= 4) {
    g.inversion = weyl_inversion(g.pack, route);
    if (g.inversion.generic) g.obstruction = obstruction_pack(g.pack, g.inversion);
  }
  return g;
}

RealTensor E0(const RealTensor& sigma, const CurvaturePack& pack) {
  if (sigma.rank() != 0) throw StructuralError("E0 acts on densities");
  const RealTensor ds = partial_derivative(sigma);
  const RealTensor dds = covariant_derivative(ds, pack.gamma);
  return trace_free_part(symmetrize(dds, {0, 1}), pack.metric) +
         with_scalar(trace_free_part(pack.schouten, pack.metric), sigma);
}

RealTensor Ek(const RealTensor& tau, const CurvaturePack& pack) {
  const int k = tau.rank() - 1;
  if (k < 1) throw StructuralError("Ek needs a hook tensor with at least one antisymmetric slot");
  const RealTensor d = covariant_derivative(tau, pack.gamma);
  RealTensor alt = antisymmetrize(d, slot_range(0, k + 1)) * static_cast<double>(k + 1);
  return cartan_project(alt, k + 1, &pack.metric, Flavor::Conformal);
}

RealTensor d_tilde(const RealTensor& tau, const RealTensor& gamma, const RealTensor& Z) {
  const int k = tau.rank();
  RealTensor s = covariant_derivative(tau, gamma) + outer(Z, tau);
  if (k == 0) return s;
  return antisymmetrize(s, slot_range(0, k + 1)) * static_cast<double>(k + 1);
}

RealTensor nabla_tilde(const RealTensor& sigma, const ConformalGeometry& geo) {
  if (sigma.rank() != 0) throw StructuralError("nabla_tilde acts on densities");
  return d_tilde(sigma, geo.pack.gamma, geo.Z());
}

RealTensor d_tilde(const RealTensor& tau, const ConformalGeometry& geo) { return d_tilde(tau, geo.pack.gamma, geo.Z()); }

RealTensor D1(const RealTensor& tau, const ConformalGeometry& geo) {
  if (tau.rank() != 1) throw StructuralError("D1 acts on 1-forms");
  const RealTensor s = covariant_derivative(tau, geo.pack.gamma) - outer(geo.Z(), tau);
  return trace_free_part(symmetrize(s, {0, 1}), geo.pack.metric);
}

RealTensor C1(const RealTensor& tau, const ConformalGeometry& geo) {
  if (tau.rank() != 2) throw StructuralError("C1 acts on symmetric 2-tensors");
  const RealTensor d = covariant_derivative(tau, geo.pack.gamma);  // ∇_r τ_st
  return wbar_contract(geo.wbar(), antisymmetrize(d, {0, 1}), geo.pack.metric) * 2.0;
}

RealTensor Dbar(const RealTensor& tau, const ConformalGeometry& geo) {
  if (tau.rank() != 2) throw StructuralError("Dbar acts on 2-forms");
  const RealTensor s = covariant_derivative(tau, geo.pack.gamma) - outer(geo.Z(), tau) * 2.0;  // [a b c]
  const RealTensor p = cartan_project(permute(s, {1, 2, 0}), 2, &geo.pack.metric, Flavor::Conformal);
  return permute(p, {2, 0, 1});
}

RealTensor H1prime(const RealTensor& psi, const ConformalGeometry& geo) {
  const RealTensor db = Dbar(psi, geo);  // (D̄ψ)_{prs}
  const RealTensor x = permute(db, {1, 2, 0});  // x_{rsp} = (D̄ψ)_{prs}
  return wbar_contract(geo.wbar(), x, geo.pack.metric) * -0.5;
}

RealTensor euclidean_dot(const RealTensor& x, const RealTensor& y, double weight) {
  if (x.size() != y.size()) throw StructuralError("euclidean_dot shape mismatch");
  const JetLayout& l = x.order() <= y.order() ? x.layout() : y.layout();
  RealJet s(l);
  for (std::size_t i = 0; i < x.size(); ++i) s.add_product(x[i], y[i]);
  return RealTensor::scalar(s, weight);
}

NoSolutionData no_solution_data(const ConformalGeometry& geo) {
  if (!geo.obstruction) throw PreconditionError("not generic: no obstruction data");
  const auto& o = *geo.obstruction;
  const RealJet denom = euclidean_dot(o.dZ, o.dZ, 0.0).value() + euclidean_dot(o.Phi, o.Phi, 0.0).value();
  if (std::abs(denom.value()) < 1e-300) throw NumericError("obstruction vanishes: no left inverse of E0");
  const RealJet inv = reciprocal(denom);
  NoSolutionData d{o.dZ * inv, o.Phi * inv, 0.0};
  RealJet one = euclidean_dot(d.zeta, o.dZ, 0.0).value() + euclidean_dot(d.eta, o.Phi, 0.0).value();
  one += -1.0;
  d.normalisation_residual = one.max_abs();
  return d;
}

RealTensor H0_nosol(const RealTensor& tau, const ConformalGeometry& geo, const NoSolutionData& data) {
  const RealTensor c = C1(tau, geo);
  const RealTensor a = euclidean_dot(data.zeta, d_tilde(c, geo), tau.weight());
  const RealTensor b = euclidean_dot(data.eta, D1(c, geo) - tau, tau.weight());
  return a + b;
}

CottonInverse cotton_inverse(const CurvaturePack& pack) {
  const RealTensor f = permute(pack.cotton, {1, 2, 0});  // F_abc = Y_cab
  const RealJet n2 = euclidean_dot(f, f, 0.0).value();
  if (std::abs(n2.value()) < 1e-300) throw PreconditionError("Cotton tensor vanishes: no left inverse of E0");
  return {f * reciprocal(n2)};
}

RealTensor H0_cotton(const RealTensor& tau, const CurvaturePack& pack, const CottonInverse& inv) {
  return euclidean_dot(inv.zeta, Ek(tau, pack), tau.weight());
}

}  // namespace c2e
