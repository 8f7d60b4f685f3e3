#include "c2e/projective.hpp"

#include <cmath>

namespace c2e {

namespace {

RealTensor kronecker(int n, const JetLayout& layout) {
  RealTensor d(n, valence("ud"), 0.0, layout);
  for (int i = 0; i < n; ++i) d.at({i, i}) = RealJet::constant(n, layout.order(), 1.0);
  return d;
}

RealTensor with_weight(RealTensor t, double w) {
  t.set_weight(w);
  return t;
}

ConformalScale fixed_change(int dim) {
  return {"shift", [dim](const Coordinates& x) {
            RealJet u = x[0] * 0.1 + x[1] * 0.02;
            if (dim >= 3) u += x[2] * x[2] * 0.05;
            if (dim >= 4) u += sin(x[3]) * 0.03;
            return u;
          }};
}

}  // namespace

RealTensor ProjectiveChart::connection(std::span<const double> point, int metric_order) const {
  RealTensor gamma = with_weight(christoffel(metric_pair(base.metric(point, metric_order))), 0.0);
  if (!change) return gamma;
  const RealTensor ups = scale_gradient(scale_jet(*change, point, metric_order));  // order m-1
  const RealTensor delta = kronecker(dim(), ups.layout());
  // δ^a_b Υ_c + δ^a_c Υ_b
  const RealTensor t = outer(delta, ups);  // slots (a, b, c)
  return gamma + t + permute(t, {0, 2, 1});
}

RealJet ProjectiveChart::volume(std::span<const double> point, int metric_order) const {
  const RealTensor g = base.metric(point, metric_order);
  const int n = dim();
  JetMatrix m(n, n, g.layout());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g.at({i, j});
  RealJet det = determinant(m);
  if (det.value() < 0) det = -det;
  RealJet v = sqrt(det);
  if (change) v = v * exp(scale_jet(*change, point, metric_order) * static_cast<double>(n + 1));
  return v;
}

ProjectiveChart make_projective_chart(const std::string& name) {
  const std::string suffix = "+shift";
  if (name.size() > suffix.size() && name.ends_with(suffix)) {
    ProjectiveChart c = make_projective_chart(name.substr(0, name.size() - suffix.size()));
    return projective_change(c, fixed_change(c.dim()));
  }
  ProjectiveChart c;
  c.base = make_chart(name);
  c.name = name;
  return c;
}

ProjectiveChart projective_change(const ProjectiveChart& chart, const ConformalScale& scale) {
  if (chart.change) throw StructuralError("projective change applied twice");
  ProjectiveChart c = chart;
  c.change = scale;
  c.name = chart.name + "+" + scale.name;
  return c;
}

ProjectivePack projective_pack_from_connection(const RealTensor& gamma_in, const RealJet& volume, double tol) {
  ProjectivePack p;
  p.dim = gamma_in.dim();
  const int n = p.dim;
  if (n < 2) throw PreconditionError("projective structures need dimension >= 2");
  if (gamma_in.order() < 2) throw BudgetError("derivative budget exhausted: the Cotton tensor needs Γ of order >= 2");
  p.gamma = with_weight(gamma_in, 0.0);
  p.volume = volume;
  p.riemann = riemann_from_christoffel(p.gamma);
  p.ricci = einsum("abad->bd", p.riemann);
  p.schouten = symmetrize(p.ricci, {0, 1}) * (1.0 / (n - 1));
  p.cotton = cotton_from_schouten(p.schouten, p.gamma);
  const RealTensor delta = kronecker(n, p.schouten.layout());
  const RealTensor dp = outer(delta, p.schouten);  // (c, a, b, d) = δ^c_a P_bd
  p.weyl = p.riemann - permute(dp, {1, 2, 0, 3}) + permute(dp, {2, 1, 0, 3});

  const double scale = 1.0 + p.riemann.max_abs();
  if (max_abs_diff(p.ricci, symmetrize(p.ricci, {0, 1})) > tol * scale)
    throw NumericError("connection is not special: Ricci tensor is not symmetric");
  const RealTensor vol = RealTensor::scalar(volume, 0.0);
  const RealTensor dvol = partial_derivative(vol) - einsum("cac->a", p.gamma) * volume;
  if (dvol.max_abs() > tol * (1.0 + std::abs(volume.value()) * (1.0 + p.gamma.max_abs())))
    throw NumericError("connection does not preserve the volume density");
  if (einsum("abad->bd", p.weyl).max_abs() > tol * scale || einsum("abcc->ab", p.weyl).max_abs() > tol * scale)
    throw NumericError("projective Weyl tensor is not trace-free");
  return p;
}

ProjectivePack projective_pack(const ProjectiveChart& chart, std::span<const double> point, int metric_order,
                               double tol) {
  return projective_pack_from_connection(chart.connection(point, metric_order), chart.volume(point, metric_order),
                                         tol);
}

RealTensor wbar_contract_proj(const RealTensor& wbar, const RealTensor& x) {
  return einsum("rsap,rsp->a", wbar, x);
}

ProjectiveGeometry projective_geometry(ProjectivePack pack) {
  ProjectiveGeometry g;
  g.pack = std::move(pack);
  const ProjectivePack& p = g.pack;
  const int n = p.dim;
  const std::size_t un = static_cast<std::size_t>(n);
  // rows (a, b, d), column c
  JetMatrix a(n * n * n, n, p.weyl.layout());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) a((i * n + j) * n + d, c) = p.weyl.at({i, j, c, d});
  g.rank = numerical_rank(a);
  const Eigen::VectorXd sv = singular_values(a);
  g.smallest_singular = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
  g.generic = g.rank == n;
  if (!g.generic) return g;

  const JetMatrix l = least_squares_left_inverse(a);
  g.wbar = RealTensor(n, valence("uudu"), 0.0, l.layout());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int e = 0; e < n; ++e)
        for (int d = 0; d < n; ++d) g.wbar.at({i, j, e, d}) = l(e, (i * n + j) * n + d);
  const RealTensor id = einsum("abed,abcd->ec", g.wbar, p.weyl);
  for (int e = 0; e < n; ++e)
    for (int c = 0; c < n; ++c) {
      RealJet diff = id.at({e, c});
      if (e == c) diff += -1.0;
      g.left_inverse_residual = std::max(g.left_inverse_residual, diff.max_abs());
    }

  g.Z = einsum("rsat,trs->a", g.wbar, p.cotton) * -1.0;
  const RealTensor dz = covariant_derivative(g.Z, p.gamma);
  g.dZ = dz - permute(dz, {1, 0});
  g.Phi = symmetrize(dz, {0, 1}) - p.schouten - outer(g.Z, g.Z);

  double z2 = 0.0, pmax = 0.0, dzmax = 0.0, phimax = 0.0;
  for (std::size_t i = 0; i < un; ++i) z2 += g.Z[i].value() * g.Z[i].value();
  for (std::size_t i = 0; i < p.schouten.size(); ++i) pmax = std::max(pmax, std::abs(p.schouten[i].value()));
  for (std::size_t i = 0; i < g.dZ.size(); ++i) dzmax = std::max(dzmax, std::abs(g.dZ[i].value()));
  for (std::size_t i = 0; i < g.Phi.size(); ++i) phimax = std::max(phimax, std::abs(g.Phi[i].value()));
  g.obstruction = std::max(dzmax, phimax);
  g.scale = 1.0 + pmax + z2;
  g.classification = g.obstruction <= kOneSolutionTolerance * g.scale ? Classification::OneSolutionCandidate
                                                                      : Classification::NoSolution;
  return g;
}

RealTensor E0_proj(const RealTensor& sigma, const ProjectivePack& pack) {
  if (sigma.rank() != 0) throw StructuralError("E0 acts on densities");
  const RealTensor dds = covariant_derivative(partial_derivative(sigma), pack.gamma);
  return symmetrize(dds, {0, 1}) + outer(pack.schouten, sigma);
}

RealTensor Ek_proj(const RealTensor& tau, const ProjectivePack& pack) {
  const int k = tau.rank() - 1;
  if (k < 1) throw StructuralError("Ek needs a hook tensor with at least one antisymmetric slot");
  const RealTensor d = covariant_derivative(tau, pack.gamma);
  const RealTensor alt = antisymmetrize(d, slot_range(0, k + 1)) * static_cast<double>(k + 1);
  return cartan_project(alt, k + 1, nullptr, Flavor::Projective);
}

namespace {
const ProjectiveGeometry& require_generic(const ProjectiveGeometry& geo) {
  if (!geo.generic) throw PreconditionError("not generic: τ_c ↦ W_ab^c_d τ_c is not injective");
  return geo;
}
}  // namespace

RealTensor d_tilde_proj(const RealTensor& tau, const ProjectiveGeometry& geo) {
  return d_tilde(tau, geo.pack.gamma, require_generic(geo).Z);
}

RealTensor D1_proj(const RealTensor& tau, const ProjectiveGeometry& geo) {
  if (tau.rank() != 1) throw StructuralError("D1 acts on 1-forms");
  const RealTensor s = covariant_derivative(tau, geo.pack.gamma) - outer(require_generic(geo).Z, tau);
  return symmetrize(s, {0, 1});
}

RealTensor C1_proj(const RealTensor& tau, const ProjectiveGeometry& geo) {
  if (tau.rank() != 2) throw StructuralError("C1 acts on symmetric 2-tensors");
  const RealTensor d = covariant_derivative(tau, geo.pack.gamma);
  return wbar_contract_proj(require_generic(geo).wbar, antisymmetrize(d, {0, 1})) * -2.0;
}

RealTensor Dbar_proj(const RealTensor& psi, const ProjectiveGeometry& geo) {
  if (psi.rank() != 2) throw StructuralError("Dbar acts on 2-forms");
  const RealTensor s = covariant_derivative(psi, geo.pack.gamma) - outer(require_generic(geo).Z, psi) * 2.0;
  const RealTensor p = cartan_project(permute(s, {1, 2, 0}), 2, nullptr, Flavor::Projective);
  return permute(p, {2, 0, 1});
}

RealTensor H1prime_proj(const RealTensor& psi, const ProjectiveGeometry& geo) {
  const RealTensor db = Dbar_proj(psi, geo);  // (D̄ψ)_{prs}
  return einsum("rsap,prs->a", geo.wbar, db) * 0.5;
}

OperatorZoo projective_zoo(std::shared_ptr<const ProjectiveGeometry> geo, int section_order) {
  OperatorZoo z;
  z.flavor = Flavor::Projective;
  z.dim = geo->pack.dim;
  z.V1 = sym_shape(1.0, Flavor::Projective);
  z.sections = {z.dim, section_order, std::nullopt};
  z.E0 = [geo](const RealTensor& s) { return E0_proj(s, geo->pack); };
  z.C1 = [geo](const RealTensor& t) { return C1_proj(t, *geo); };
  z.D1 = [geo](const RealTensor& t) { return D1_proj(t, *geo); };
  z.H1prime = [geo](const RealTensor& t) { return H1prime_proj(t, *geo); };
  z.d_tilde = [geo](const RealTensor& t) { return d_tilde_proj(t, *geo); };
  return z;
}

EquivalenceData build_onesol_proj_complex(const ProjectiveChart& chart, const std::vector<double>& point,
                                          int metric_order, int section_order) {
  if (chart.dim() < 3) throw PreconditionError(chart.name + ": the one-solution complex needs dimension >= 3");
  auto geo = std::make_shared<const ProjectiveGeometry>(projective_geometry(projective_pack(chart, point, metric_order)));
  if (!geo->generic) throw PreconditionError(chart.name + ": projective Weyl tensor not generic at the sample point");
  if (geo->classification != Classification::OneSolutionCandidate)
    throw PreconditionError(chart.name + ": obstruction does not vanish, no one-solution complex");
  return build_onesol_complex(projective_zoo(geo, section_order));
}

EquivalenceData build_nosol_proj_complex(const ProjectiveChart& chart, const std::vector<double>& point,
                                         int metric_order, int section_order) {
  if (chart.dim() != 2) throw PreconditionError(chart.name + ": the Cotton left inverse is the surface case");
  auto pack = std::make_shared<const ProjectivePack>(projective_pack(chart, point, metric_order));
  const RealTensor f = permute(pack->cotton, {1, 2, 0});  // F_abd = Y_dab
  const RealJet n2 = euclidean_dot(f, f, 0.0).value();
  if (std::abs(n2.value()) < 1e-24 * (1.0 + pack->schouten.max_abs()))
    throw PreconditionError(chart.name + ": projective Cotton tensor vanishes, the structure is flat");
  auto zeta = std::make_shared<const RealTensor>(f * reciprocal(n2));
  OperatorZoo z;
  z.flavor = Flavor::Projective;
  z.dim = 2;
  z.V1 = sym_shape(1.0, Flavor::Projective);
  z.sections = {2, section_order, std::nullopt};
  z.E0 = [pack](const RealTensor& s) { return E0_proj(s, *pack); };
  return build_nosol_complex(
      z, [pack, zeta](const RealTensor& t) { return euclidean_dot(*zeta, Ek_proj(t, *pack), t.weight()); }, 1);
}

}  // namespace c2e
