#include <doctest.h>

#include <cmath>

#include "c2e/geometry.hpp"
#include "test_support.hpp"

using namespace c2e;

namespace {

const double kS2Point[4] = {0.2, -0.4, 0.5, 0.1};
const double kSchwPoint[4] = {0.3, 4.5, 1.1, 0.7};
const double kPertPoint[4] = {0.1, -0.2, 0.05, 0.15};

double rel(const RealTensor& a, const RealTensor& b) { return relative_residual(a, b); }

}  // namespace

TEST_CASE("flat chart has vanishing curvature") {
  const MetricChart c = make_chart("flat");
  const CurvaturePack p = curvature_pack(c, std::vector<double>{0.1, 0.2, 0.3, 0.4}, 5);
  CHECK(p.riemann.max_abs() == 0.0);
  CHECK(p.weyl.max_abs() == 0.0);
  CHECK(p.schouten.max_abs() == 0.0);
  CHECK(p.cotton.max_abs() == 0.0);
}

TEST_CASE("unit S2 x S2 is Einstein with J = 2/3") {
  // Each unit sphere factor has Ric = g, so the product has Ric = g, scalar
  // curvature 4, J = 4/6 and P = (g - (2/3) g)/2 = g/6.
  const MetricChart c = make_chart("s2xs2");
  const CurvaturePack p = curvature_pack(c, kS2Point, 5);
  RealTensor ric = p.ricci;
  ric.set_weight(2.0);
  CHECK(rel(ric, p.metric.g) < 1e-12);
  CHECK(std::abs(p.J.value().value() - 2.0 / 3.0) < 1e-12);
  RealTensor sixth = p.metric.g * (1.0 / 6.0);
  sixth.set_weight(0.0);
  CHECK(rel(p.schouten, sixth) < 1e-12);
  CHECK(p.weyl.max_abs() > 0.1);
}

TEST_CASE("Schwarzschild is Ricci flat with nonzero Weyl") {
  const MetricChart c = make_chart("schwarzschild");
  const CurvaturePack p = curvature_pack(c, kSchwPoint, 4);
  CHECK(p.ricci.max_abs() < 1e-10);
  CHECK(p.weyl.max_abs() > 1e-3);
}

TEST_CASE("conformally flat chart has vanishing Weyl tensor") {
  const MetricChart c = make_chart("conf-flat");
  const CurvaturePack p = curvature_pack(c, std::vector<double>{0.3, -0.1, 0.2, 0.4}, 4);
  CHECK(p.weyl.max_abs() / (1.0 + p.riemann_down.max_abs()) < 1e-9);
  CHECK(p.riemann.max_abs() > 1e-2);
}

TEST_CASE("curvature invariants on built-in charts") {
  for (const char* name : {"s2xs2", "s2xs2-conf", "perturbed:3", "conf-flat"}) {
    const MetricChart c = make_chart(name);
    const CurvaturePack p = curvature_pack(c, kPertPoint, 5, {false, 0.0});
    for (const auto& [what, res] : curvature_invariants(p)) {
      INFO(name << ": " << what);
      CHECK(res < 1e-9);
    }
  }
}

TEST_CASE("metricity, parallel volume form and flat reduction to partials") {
  const MetricChart c = make_chart("perturbed:2");
  const CurvaturePack p = curvature_pack(c, kPertPoint, 5);
  CHECK(covariant_derivative(p.metric.g, p.gamma).max_abs() < 1e-12);
  CHECK(covariant_derivative(p.metric.ginv, p.gamma).max_abs() < 1e-12);
  CHECK(covariant_derivative(p.volume, p.gamma).max_abs() < 1e-11);

  const CurvaturePack f = curvature_pack(make_chart("flat"), kPertPoint, 4);
  std::mt19937_64 rng(3);
  const RealTensor t = testing::random_tensor(4, "du", 1.0, 4, rng);
  CHECK(max_abs_diff(covariant_derivative(t, f.gamma), partial_derivative(t)) == 0.0);
}

TEST_CASE("the W contraction identity in four dimensions") {
  for (const char* name : {"s2xs2", "schwarzschild", "perturbed:1", "perturbed:4"}) {
    const MetricChart c = make_chart(name);
    const double* pt = std::string(name) == "schwarzschild" ? kSchwPoint : kPertPoint;
    const CurvaturePack p = curvature_pack(c, std::span<const double>(pt, 4), 4);
    RealTensor wup = p.weyl;
    for (int s = 0; s < 4; ++s) wup = raise(wup, s, p.metric.ginv);
    const RealTensor lhs = einsum("abcd,abce->de", wup, p.weyl);
    const RealTensor norm = einsum("abcd,abcd->", wup, p.weyl);
    RealTensor rhs = RealTensor::zeros_like(lhs);
    for (int d = 0; d < 4; ++d) rhs.at({d, d}) = norm.value() * 0.25;
    INFO(name);
    CHECK(rel(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("Weyl tensor is conformally invariant and Cotton shifts by W") {
  const MetricChart c = make_chart("perturbed:5");
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ConformalScale s = random_scale(4, seed);
    const MetricChart ch = conformal_rescale(c, s);
    const CurvaturePack p = curvature_pack(c, kPertPoint, 5);
    const CurvaturePack q = curvature_pack(ch, kPertPoint, 5);
    const RealJet ups = scale_jet(s, kPertPoint, 5);
    CHECK(rel(q.weyl, transform_density(p.weyl, ups, 2.0)) < 1e-11);
    CHECK(rel(q.weyl_mixed, p.weyl_mixed) < 1e-11);
    // Ŷ_bcd = Y_bcd + Υ^a W_abcd
    const RealTensor du = raise(scale_gradient(ups), 0, p.metric.ginv);
    const RealTensor shifted = p.cotton + einsum("a,abcd->bcd", du, p.weyl);
    CHECK(rel(q.cotton, shifted) < 1e-10);
  }
}

TEST_CASE("covariant derivative transformation laws under rescaling") {
  const MetricChart c = make_chart("perturbed:6");
  std::mt19937_64 rng(21);
  for (std::uint64_t seed : {4u, 5u}) {
    const ConformalScale s = random_scale(4, seed);
    const MetricChart ch = conformal_rescale(c, s);
    const CurvaturePack p = curvature_pack(c, kPertPoint, 4);
    const CurvaturePack q = curvature_pack(ch, kPertPoint, 4);
    const RealJet ups = scale_jet(s, kPertPoint, 4);
    const RealTensor du = scale_gradient(ups);

    // density of weight w: ∇̂σ = ∇σ + wΥσ
    for (double w : {1.0, -2.0}) {
      const RealTensor sigma = testing::random_tensor(4, "", w, 4, rng);
      RealTensor sig = RealTensor::scalar(sigma[0], w);
      const RealTensor lhs = covariant_derivative(transform_density(sig, ups, w), q.gamma);
      RealTensor shift = du * sig.value() * w;
      shift.set_weight(w);
      const RealTensor rhs = transform_density(covariant_derivative(sig, p.gamma) + shift, ups, w);
      CHECK(rel(lhs, rhs) < 1e-11);
    }

    // weight-0 covector: ∇̂τ = ∇τ - Υ_aτ_b - Υ_bτ_a + Υ^rτ_r g_ab
    const RealTensor tau = testing::random_tensor(4, "d", 0.0, 4, rng);
    const RealTensor lhs = covariant_derivative(tau, q.gamma);
    const RealTensor ut = outer(du, tau);
    RealTensor contr = einsum("r,r->", raise(du, 0, p.metric.ginv), tau);
    RealTensor rhs = covariant_derivative(tau, p.gamma) - ut - permute(ut, {1, 0});
    RealTensor corr = outer(contr, p.metric.g);
    corr.set_weight(0.0);
    rhs += corr;
    CHECK(rel(lhs, rhs) < 1e-11);
  }
}

TEST_CASE("identity rescaling changes nothing") {
  const MetricChart c = make_chart("s2xs2");
  const ConformalScale zero{"zero", [](const Coordinates& x) { return RealJet(x.front().layout()); }};
  const CurvaturePack p = curvature_pack(c, kS2Point, 4);
  const CurvaturePack q = curvature_pack(conformal_rescale(c, zero), kS2Point, 4);
  CHECK(max_abs_diff(p.weyl, q.weyl) == 0.0);
}

TEST_CASE("unknown charts and degenerate requests") {
  CHECK_THROWS_AS(make_chart("nope"), PreconditionError);
  CHECK_THROWS_AS(make_chart("s2xs2:3"), PreconditionError);
  CHECK_THROWS_AS(curvature_pack(make_chart("flat"), kS2Point, 2), BudgetError);
  CHECK(make_chart("perturbed:9").name == "perturbed:9");
}
