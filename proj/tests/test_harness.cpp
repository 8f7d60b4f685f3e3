#include <doctest.h>

#include "c2e/complexes.hpp"

using namespace c2e;

namespace {

SweepConfig small_sweep(std::size_t points = 3, std::size_t trials = 2) {
  SweepConfig c;
  c.points = points;
  c.trials = trials;
  c.seed = 11;
  c.tol = 1e-7;
  return c;
}

std::shared_ptr<const ConformalGeometry> s2xs2_geometry(int order = 6) {
  const MetricChart c = make_chart("s2xs2");
  return conformal_geometry_at(c, sample_point(c, 5, 0), order);
}

SectionContext flat_context(int order) {
  const CurvaturePack p = curvature_pack(make_chart("flat"), std::vector<double>{0, 0, 0, 0}, 4);
  return {4, order, p.metric};
}

OperatorNode exterior_d(int k) {
  const RealTensor gamma = RealTensor::zeros(4, "udd", 0.0, 4, 6);
  const RealTensor Z = RealTensor::zeros(4, "d", 0.0, 4, 6);
  return tensor_operator("d", form_shape(k, 1.0), form_shape(k + 1, 1.0), 1,
                         [gamma, Z](const RealTensor& t) { return d_tilde(t, gamma, Z); });
}

double worst(const std::vector<IdentityCheck>& checks, std::uint64_t seed = 3) {
  double m = 0.0;
  for (const auto& c : checks) {
    auto rng = make_rng(seed, 0, 0, 0);
    m = std::max(m, c.run(rng));
  }
  return m;
}

}  // namespace

TEST_CASE("compose checks shapes and accumulates order") {
  const auto geo = s2xs2_geometry();
  const OperatorZoo z = conformal_zoo(geo, 6);
  const OperatorNode E0 = tensor_operator("E0", density_shape(1), sym_tf_shape(1), 2, z.E0);
  const OperatorNode C1 = tensor_operator("C1", sym_tf_shape(1), form_shape(1, 1), 1, z.C1);
  const OperatorNode c = compose(C1, E0);
  CHECK(c.order == 3);
  CHECK(c.source == BundleShape{density_shape(1)});
  CHECK_THROWS_AS(compose(E0, C1), StructuralError);

  // identity composition is extensionally the operator
  const IdentityCheck id_check =
      operator_identity("id∘E0", "id∘E0 = E0", compose(identity(E0.target), E0), E0, z.sections);
  auto rng = make_rng(1, 0, 0, 0);
  CHECK(id_check.run(rng) == 0.0);

  // wrong input shape
  auto rng2 = make_rng(1, 0, 0, 0);
  const Section wrong = random_section({form_shape(1, 1)}, 4, 4, nullptr, rng2);
  CHECK_THROWS_AS(E0(wrong), StructuralError);
}

TEST_CASE("over-budget composition raises a budget error") {
  const auto geo = s2xs2_geometry(5);
  const OperatorZoo z = conformal_zoo(geo, 2);
  const OperatorNode E0 = tensor_operator("E0", density_shape(1), sym_tf_shape(1), 2, z.E0);
  const OperatorNode C1 = tensor_operator("C1", sym_tf_shape(1), form_shape(1, 1), 1, z.C1);
  const IdentityCheck c = operator_identity("C1E0", "", compose(C1, E0), compose(C1, E0), z.sections);
  auto rng = make_rng(1, 0, 0, 0);
  CHECK_THROWS_AS(c.run(rng), BudgetError);
}

TEST_CASE("de Rham complex composes to zero exactly") {
  ComplexSpec dr{"de Rham", {exterior_d(0), exterior_d(1), exterior_d(2), exterior_d(3)}, flat_context(5)};
  CHECK(worst(complex_checks(dr)) < 1e-14);  // rounding in the antisymmetriser only
}

TEST_CASE("identity equivalence of a complex with itself has zero residual") {
  ComplexSpec dr{"de Rham", {exterior_d(0), exterior_d(1), exterior_d(2)}, flat_context(5)};
  EquivalenceData e{dr, dr, {}, {}, {}, {}};
  for (const auto& b : dr.bundles()) {
    e.C.push_back(identity(b));
    e.D.push_back(identity(b));
  }
  const auto B = dr.bundles();
  for (std::size_t l = 0; l + 1 < B.size(); ++l) {
    e.H.push_back(zero(B[l + 1], B[l]));
    e.Hp.push_back(zero(B[l + 1], B[l]));
  }
  const auto checks = equivalence_checks(e);
  CHECK(checks.size() == 2 + 2 + 6 + 8);
  CHECK(worst(checks) < 1e-14);

  EquivalenceData bad = e;
  bad.C.pop_back();
  CHECK_THROWS_AS(bad.validate(), StructuralError);
}

TEST_CASE("one-solution complex has the displayed bundle shapes") {
  const MetricChart c = make_chart("s2xs2");
  const EquivalenceData e = build_onesol_complex(c, sample_point(c, 5, 0), 6, 6);
  const auto T = e.top.bundles();
  REQUIRE(T.size() == 5);
  CHECK(label(T[0]) == "E[1]");
  CHECK(label(T[1]) == "E_(ab)0[1]");
  CHECK(label(T[2]) == "E_(ab)0[1] + E_[2-form][1]");
  CHECK(label(T[3]) == "E_[1-form][1] + E_[3-form][1]");
  CHECK(label(T[4]) == "E_[4-form][1]");
  CHECK(e.top.ops.size() == 4);
  CHECK(e.bottom.ops.size() == 4);
}

TEST_CASE("one-solution complex and equivalence on S2xS2") {
  const MetricChart c = make_chart("s2xs2");
  const auto rep = check_equivalence(
      "onesol",
      [&](std::size_t i, std::vector<double>& p) {
        p = sample_point(c, 5, i);
        return build_onesol_complex(c, p, 6, 6);
      },
      small_sweep());
  for (const auto& r : rep.results) {
    INFO(r.name << " " << r.relation << " " << r.max_residual);
    CHECK(r.pass);
  }
  CHECK(rep.results.size() == 3 + 3 + 8 + 10);
}

TEST_CASE("lift of the first square reproduces the second operator") {
  const auto geo = s2xs2_geometry();
  const OperatorZoo z = conformal_zoo(geo, 6);
  const EquivalenceData e = build_onesol_complex(z);
  const OperatorNode K1 = lift_compatibility(e.top.ops[0], std::nullopt, e.C[1], e.D[1], e.bottom.ops[1]);
  CHECK(K1.target == e.top.ops[1].target);
  const IdentityCheck same = operator_identity("lift", "", K1, e.top.ops[1], z.sections);
  CHECK(worst({same}) < 1e-12);
  const IdentityCheck cx = operator_identity("K1K0", "", compose(K1, e.top.ops[0]),
                                             zero(e.top.ops[0].source, K1.target), z.sections);
  CHECK(worst({cx}) < 1e-7);

  // trivial square: C1 = D1 = id
  const OperatorNode idV = identity({sym_tf_shape(1)});
  const OperatorNode L = lift_compatibility(e.top.ops[0], std::nullopt, idV, idV, idV);
  CHECK(L.target == concat({sym_tf_shape(1)}, {sym_tf_shape(1)}));
}

TEST_CASE("one-solution construction refuses flat and perturbed charts") {
  CHECK_THROWS_AS(build_onesol_complex(make_chart("flat"), {0.1, 0.2, 0.3, 0.4}, 6, 6), PreconditionError);
  const MetricChart p = make_chart("perturbed:1");
  CHECK_THROWS_AS(build_onesol_complex(p, sample_point(p, 1, 0), 6, 6), PreconditionError);
}

TEST_CASE("no-solution complex on a perturbed chart") {
  const MetricChart c = make_chart("perturbed:3");
  const auto rep = check_equivalence(
      "nosol",
      [&](std::size_t i, std::vector<double>& p) {
        p = sample_point(c, 2, i);
        return build_nosol_complex(c, p, 8, 8);
      },
      small_sweep(2, 2));
  for (const auto& r : rep.results) {
    INFO(r.name << " " << r.relation << " " << r.max_residual);
    CHECK(r.pass);
  }
  CHECK(rep.find("homotopy DC0") != nullptr);
  CHECK_THROWS_AS(build_nosol_complex(make_chart("s2xs2"), {0.1, 0.2, 0.3, 0.4}, 8, 8), PreconditionError);
}

TEST_CASE("three-dimensional no-solution complex from the Cotton tensor") {
  const MetricChart c = make_chart("perturbed3:2");
  const auto rep = check_equivalence(
      "nosol3",
      [&](std::size_t i, std::vector<double>& p) {
        p = sample_point(c, 2, i);
        return build_nosol_complex(c, p, 6, 6);
      },
      small_sweep(2, 2));
  for (const auto& r : rep.results) {
    INFO(r.name << " " << r.relation << " " << r.max_residual);
    CHECK(r.pass);
  }
}

TEST_CASE("a failing identity is reported, not thrown") {
  const SectionContext ctx = flat_context(4);
  const OperatorNode twice = tensor_operator("2id", form_shape(1, 1), form_shape(1, 1), 0,
                                             [](const RealTensor& t) { return t * 2.0; });
  const auto rep = run_sweep(
      "fail", [&](std::size_t, std::vector<double>&) {
        return std::vector<IdentityCheck>{operator_identity("2id = id", "", twice, identity(twice.source), ctx)};
      },
      small_sweep(2, 2));
  CHECK_FALSE(rep.all_pass());
  CHECK(rep.results.at(0).max_residual > 0.1);
}
