#include <doctest.h>

#include "c2e/conformal.hpp"
#include "c2e/sections.hpp"

using namespace c2e;

namespace {

const double kPoint[4] = {0.11, -0.07, 0.05, 0.13};

double rel(const RealTensor& a, const RealTensor& b) { return relative_residual(a, b); }

RealTensor random_of(const ShapeSpec& s, const CurvaturePack& p, int order, std::uint64_t trial) {
  auto rng = make_rng(42, 0, trial, 1);
  return random_tensor(s, p.dim, order, &p.metric, rng);
}

// W_{abcd}∇^dσ + Y_{cab}σ
RealTensor comp_rhs(const RealTensor& sigma, const CurvaturePack& p) {
  const RealTensor du = raise(partial_derivative(sigma), 0, p.metric.ginv);
  return einsum("abcd,d->abc", p.weyl, du) + outer(permute(p.cotton, {1, 2, 0}), sigma);
}

}  // namespace

TEST_CASE("E0 on flat space and on the Einstein product") {
  const CurvaturePack flat = curvature_pack(make_chart("flat"), kPoint, 4);
  RealTensor sigma = RealTensor::scalar(coordinate_jets(std::vector<double>{0, 0, 0, 0}, 4)[0], 1.0);
  sigma = RealTensor::scalar(sigma.value() * sigma.value(), 1.0);  // x1^2
  const RealTensor e = E0(sigma, flat);
  CHECK(e.at({0, 0})[0] == doctest::Approx(1.5));
  for (int i = 1; i < 4; ++i) CHECK(e.at({i, i})[0] == doctest::Approx(-0.5));
  CHECK(e.at({0, 1}).max_abs() < 1e-15);

  const CurvaturePack s = curvature_pack(make_chart("s2xs2"), kPoint, 4);
  const RealTensor one = RealTensor::scalar(RealJet::constant(4, 4, 1.0), 1.0);
  CHECK(E0(one, s).max_abs() < 1e-13);
}

TEST_CASE("E1 composed with E0 is W·∇σ + Yσ on every chart") {
  for (const char* name : {"flat", "s2xs2", "schwarzschild", "perturbed:1", "perturbed:2"}) {
    const MetricChart c = make_chart(name);
    const auto pt = sample_point(c, 3, 0);
    const CurvaturePack p = curvature_pack(c, pt, 5);
    for (std::uint64_t t = 0; t < 3; ++t) {
      const RealTensor sigma = random_of(density_shape(1), p, 5, t);
      INFO(name);
      CHECK(rel(Ek(E0(sigma, p), p), comp_rhs(sigma, p)) < 1e-9);
    }
  }
}

TEST_CASE("Weyl inversion: genericity and both routes") {
  const CurvaturePack flat = curvature_pack(make_chart("flat"), kPoint, 4);
  const GenericityReport f = weyl_inversion(flat);
  CHECK(f.rank == 0);
  CHECK_FALSE(f.generic);

  const CurvaturePack s = curvature_pack(make_chart("s2xs2"), kPoint, 4);
  const GenericityReport r = weyl_inversion(s);
  CHECK(r.generic);
  CHECK(r.method == InversionMethod::PreferredV);
  CHECK(r.left_inverse_residual < 1e-9);

  const CurvaturePack q = curvature_pack(make_chart("perturbed:1"), kPoint, 4);
  const GenericityReport a = weyl_inversion(q, InversionRoute::PreferredV);
  const GenericityReport b = weyl_inversion(q, InversionRoute::LeastSquares);
  CHECK(a.left_inverse_residual < 1e-9);
  CHECK(b.left_inverse_residual < 1e-9);
  CHECK(b.method == InversionMethod::LeastSquares);
}

TEST_CASE("operator identities on a generic chart") {
  for (const char* name : {"perturbed:1", "s2xs2-conf"}) {
    for (InversionRoute route : {InversionRoute::PreferredV, InversionRoute::LeastSquares}) {
      const MetricChart c = make_chart(name);
      const ConformalGeometry g = conformal_geometry(curvature_pack(c, kPoint, 6), route);
      const auto& o = *g.obstruction;
      const int ord = 6;
      const RealTensor sigma = random_of(density_shape(1), g.pack, ord, 1);
      const RealTensor tau1 = random_of(form_shape(1, 1), g.pack, ord, 2);
      const RealTensor tau2 = random_of(sym_tf_shape(1), g.pack, ord, 3);
      INFO(name << " route " << static_cast<int>(route));
      // C1∘E0 = d̃ and D1∘d̃ = E0 + Φσ
      CHECK(rel(C1(E0(sigma, g.pack), g), nabla_tilde(sigma, g)) < 1e-9);
      CHECK(rel(D1(d_tilde(sigma, g), g), E0(sigma, g.pack) + outer(o.Phi, sigma)) < 1e-9);
      // d̃d̃σ = dZ σ
      CHECK(rel(d_tilde(d_tilde(sigma, g), g), outer(o.dZ, sigma)) < 1e-9);
      // C1∘D1(τ) = τ - H1'(d̃τ) - W̄^{rsp}_a[2Φ_pr τ_s + ½ dZ_rs τ_p]
      RealTensor x = outer(o.Phi, tau1) * 2.0;  // [p r s] = Φ_pr τ_s
      x = permute(x, {1, 2, 0});                  // [r s p]
      RealTensor y = outer(o.dZ, tau1) * 0.5;     // [r s p] = dZ_rs τ_p
      const RealTensor extra = wbar_contract(g.wbar(), x + y, g.pack.metric);
      CHECK(rel(C1(D1(tau1, g), g), tau1 - H1prime(d_tilde(tau1, g), g) - extra) < 1e-9);
      (void)tau2;
    }
  }
}

TEST_CASE("one-solution identities on the Einstein product") {
  const ConformalGeometry g = conformal_geometry(curvature_pack(make_chart("s2xs2"), kPoint, 6));
  CHECK(g.obstruction->classification == Classification::OneSolutionCandidate);
  const RealTensor tau = random_of(form_shape(1, 1), g.pack, 6, 5);
  CHECK(rel(tau - C1(D1(tau, g), g), H1prime(d_tilde(tau, g), g)) < 1e-9);
}

TEST_CASE("no-solution left inverse") {
  const ConformalGeometry g = conformal_geometry(curvature_pack(make_chart("perturbed:1"), kPoint, 8));
  CHECK(g.obstruction->classification == Classification::NoSolution);
  const NoSolutionData d = no_solution_data(g);
  CHECK(d.normalisation_residual < 1e-10);
  const RealTensor sigma = random_of(density_shape(1), g.pack, 8, 7);
  CHECK(rel(H0_nosol(E0(sigma, g.pack), g, d), sigma) < 1e-8);
}

TEST_CASE("three-dimensional Cotton inverse") {
  const MetricChart c = make_chart("perturbed3:1");
  const CurvaturePack p = curvature_pack(c, std::vector<double>{0.1, 0.05, -0.1}, 6);
  const CottonInverse inv = cotton_inverse(p);
  const RealTensor sigma = random_of(density_shape(1), p, 6, 8);
  CHECK(rel(H0_cotton(E0(sigma, p), p, inv), sigma) < 1e-9);
}
