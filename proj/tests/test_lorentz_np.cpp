#include <doctest.h>

#include <random>

#include "c2e/lorentz_np.hpp"

using namespace c2e;

namespace {

NPScalars random_psi(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  NPScalars s;
  for (auto& p : s.psi) p = {u(rng), u(rng)};
  return s;
}

double psi_diff(const NPScalars& a, const NPScalars& b) {
  double d = 0.0;
  for (int i = 0; i < 5; ++i) d = std::max(d, std::abs(a.psi[i] - b.psi[i]));
  return d;
}

NPScalars only(int i, cplx v) {
  NPScalars s;
  s.psi[static_cast<std::size_t>(i)] = v;
  return s;
}

// A non-orthonormal frame: canonical frame pushed through a random linear map.
NullFrame skewed_frame(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) += u(rng);
  const NullFrame c = canonical_frame();
  auto push = [&](const CVec4& v) {
    CVec4 r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r[i] += A(i, j) * v[j];
    return r;
  };
  return make_frame(push(c.l), push(c.n), push(c.m));
}

}  // namespace

TEST_CASE("null frame relations") {
  const NullFrame f = canonical_frame();
  CHECK(frame_defect(f) < 1e-15);
  CHECK(frame_defect(boost_spin(f, 3.7, 0.4)) < 1e-14);
  CHECK(frame_defect(skewed_frame(5)) < 1e-12);

  // products as axioms give one positive and three negative directions
  const Eigen::Matrix4d g = frame_metric(f.l, f.n, f.m);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g);
  int pos = 0, neg = 0;
  for (int i = 0; i < 4; ++i) (es.eigenvalues()(i) > 0 ? pos : neg)++;
  CHECK(pos == 1);
  CHECK(neg == 3);

  CVec4 bad = f.n;
  bad[0] *= 2.0;
  CHECK_THROWS_AS(make_frame(f.l, bad, f.m, f.g), StructuralError);
}

TEST_CASE("Weyl reconstruction and NP scalars round-trip") {
  const NullFrame f = canonical_frame();
  CHECK(reconstruct_weyl(NPScalars{}, f).max_abs() == 0.0);

  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const NPScalars psi = random_psi(rng);
    const NullFrame fr = i % 2 ? f : skewed_frame(static_cast<std::uint64_t>(i));
    const CTensor w = reconstruct_weyl(psi, fr);
    CHECK(w.max_imag() < 1e-12);
    CHECK(weyl_symmetry_defect(w, fr.ginv) < 1e-12);
    worst = std::max(worst, psi_diff(np_scalars(w, fr), psi));
  }
  CHECK(worst <= 1e-10);

  // pure Ψ4: -Ψ4* (ll)⊙(m̄m̄) - Ψ4 (ll)⊙(mm)
  const cplx p4(0.3, -0.8);
  const CVec4 l = f.lower(f.l), m = f.lower(f.m), mb = f.lower(f.mbar());
  const CTensor expect =
      -std::conj(p4) * kn_prod(sym_prod(l, l), sym_prod(mb, mb)) - p4 * kn_prod(sym_prod(l, l), sym_prod(m, m));
  CHECK(max_abs_diff(reconstruct_weyl(only(4, p4), f), expect) < 1e-15);

  CTensor broken = reconstruct_weyl(only(2, 1.0), f);
  broken.at({0, 1, 0, 1}) += 1.0;
  CHECK_THROWS_AS(np_scalars(broken, f), StructuralError);
}

TEST_CASE("quadratic invariant: brute force against the NP formula") {
  const NullFrame f = canonical_frame();
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const NPScalars psi = random_psi(rng);
    const CTensor w = reconstruct_weyl(psi, f);
    worst = std::max(worst, std::abs(quadratic_invariant(w, f.ginv) - np_quadratic(psi)));
  }
  CHECK(worst <= 1e-10);
  CHECK(quadratic_invariant(reconstruct_weyl(only(2, 1.0), f), f.ginv) == doctest::Approx(48.0).epsilon(1e-12));
  CHECK(np_quadratic(only(2, 1.0)) == doctest::Approx(48.0));
}

TEST_CASE("Type III invariants vanish") {
  const NullFrame f = canonical_frame();
  const CTensor w = reconstruct_weyl(only(3, 1.0), f);
  CHECK(w.max_abs() > 0.1);
  CHECK(std::abs(quadratic_invariant(w, f.ginv)) < 1e-14);
  CHECK(std::abs(cubic_invariants(w, f.ginv).trace) < 1e-14);
  CHECK_THROWS_AS(cubic_inversion(w, f.ginv), NumericError);
}

TEST_CASE("cubic identity and inversion when the quadratic invariant vanishes") {
  const NullFrame f = skewed_frame(11);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    NPScalars psi = random_psi(rng);
    psi.psi[0] = psi.psi[1] = 0.0;
    psi.psi[2] = std::polar(0.5 + 0.1 * i, M_PI / 4);  // Re(3Ψ2²) = 0
    const CTensor w = reconstruct_weyl(psi, f);
    REQUIRE(std::abs(quadratic_invariant(w, f.ginv)) < 1e-12);
    const CubicInvariants c = cubic_invariants(w, f.ginv);
    CHECK(std::abs(c.trace) > 1e-3);
    double d = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) d = std::max(d, std::abs(c.V3.at({a, b}) - (a == b ? 0.25 * c.trace : cplx{})));
    CHECK(d < 1e-10 * (1.0 + std::abs(c.trace)));

    const CTensor wbar = cubic_inversion(w, f.ginv);
    double id = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        cplx s{};
        for (int p = 0; p < 4; ++p)
          for (int q = 0; q < 4; ++q)
            for (int t = 0; t < 4; ++t) s += wbar.at({p, q, t, b}) * w.at({p, q, t, a});
        id = std::max(id, std::abs(s - (a == b ? 1.0 : 0.0)));
      }
    CHECK(id < 1e-9);
  }
}

TEST_CASE("Petrov filtration") {
  CHECK(petrov_classify(only(3, 1.0)) == PetrovType::III);
  CHECK(petrov_classify(only(4, 1.0)) == PetrovType::N);
  CHECK(petrov_classify(only(2, 1.0)) == PetrovType::II);
  CHECK(petrov_classify(only(1, 1.0)) == PetrovType::I);
  CHECK(petrov_classify(only(0, 1.0)) == PetrovType::General);
  CHECK(petrov_classify(NPScalars{}) == PetrovType::O);
}

TEST_CASE("Schwarzschild in its static frame has only Psi2 = -M/r^3") {
  for (double r : {3.0, 4.5, 8.0}) {
    const std::vector<double> pt{0.2, r, 1.1, 0.7};
    const NPScalars psi = schwarzschild_np(pt);
    CHECK(std::abs(psi.psi[2] - cplx(-1.0 / (r * r * r))) < 1e-10);
    for (int i : {0, 1, 3, 4}) CHECK(std::abs(psi.psi[i]) < 1e-10);
    CHECK(petrov_classify(psi, 1e-10) == PetrovType::II);
  }
}

TEST_CASE("hook basis spans a 16-dimensional space of hook tensors") {
  const NullFrame f = skewed_frame(2);
  const auto basis = hook_basis(f);
  REQUIRE(basis.size() == 16);
  Eigen::Matrix<cplx, 64, 16> B;
  for (int k = 0; k < 16; ++k) {
    const CTensor& h = basis[static_cast<std::size_t>(k)];
    double sym = 0.0, alt = 0.0, tr = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q)
        for (int r = 0; r < 4; ++r) {
          sym = std::max(sym, std::abs(h.at({p, q, r}) + h.at({q, p, r})));
          alt = std::max(alt, std::abs(h.at({p, q, r}) + h.at({q, r, p}) + h.at({r, p, q})));
        }
    for (int q = 0; q < 4; ++q) {
      cplx s{};
      for (int p = 0; p < 4; ++p)
        for (int r = 0; r < 4; ++r) s += f.ginv(p, r) * h.at({p, q, r});
      tr = std::max(tr, std::abs(s));
    }
    CHECK(sym < 1e-12);
    CHECK(alt < 1e-12);
    CHECK(tr < 1e-12);
    for (int i = 0; i < 64; ++i) B(i, k) = h.c[static_cast<std::size_t>(i)];
  }
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 64, 16>> svd(B);
  CHECK(svd.singularValues()(15) > 1e-3);
}

TEST_CASE("Weyl map matrix for Type III and Type N") {
  const NullFrame f = canonical_frame();
  const cplx p3(0.6, -0.3), p4(-0.2, 0.9);
  NPScalars psi;
  psi.psi[3] = p3;
  psi.psi[4] = p4;
  const WeylMap wm = weyl_map_matrix(reconstruct_weyl(psi, f), f);
  Eigen::Matrix<cplx, 16, 4> expect = Eigen::Matrix<cplx, 16, 4>::Zero();
  expect(7, 0) = std::conj(p3);
  expect(9, 0) = p3;
  expect(10, 0) = -std::conj(p4);
  expect(10, 1) = -std::conj(p3);
  expect(11, 2) = -std::conj(p3);
  expect(12, 1) = -p3;
  expect(13, 0) = -p4;
  expect(13, 2) = -p3;
  expect(14, 2) = std::conj(p4);
  expect(14, 3) = std::conj(p3);
  expect(15, 1) = p4;
  expect(15, 3) = p3;
  CHECK((wm.matrix - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(wm.projection_residual < 1e-12);

  // v = n with Ψ3 only: exactly the two Ψ3*, Ψ3 entries
  const WeylMap m3 = weyl_map_matrix(reconstruct_weyl(only(3, p3), f), f);
  for (int row = 0; row < 16; ++row) {
    const bool hit = row == 7 || row == 9;
    CHECK((std::abs(m3.matrix(row, 0)) > 1e-12) == hit);
  }

  // contraction raises boost weight by exactly 1 (Ψ3) or 2 (Ψ4)
  const auto& rw = hook_basis_boost_weights();
  const auto& cw = vector_boost_weights();
  const WeylMap m4 = weyl_map_matrix(reconstruct_weyl(only(4, p4), f), f);
  for (int row = 0; row < 16; ++row)
    for (int col = 0; col < 4; ++col) {
      if (rw[row] != cw[col] + 1) CHECK(std::abs(m3.matrix(row, col)) < 1e-12);
      if (rw[row] != cw[col] + 2) CHECK(std::abs(m4.matrix(row, col)) < 1e-12);
    }
}

TEST_CASE("genericity rank: Type III with Psi3 is injective, Type N is not") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const NullFrame f = skewed_frame(static_cast<std::uint64_t>(100 + i));
    NPScalars psi = random_psi(rng);
    psi.psi[0] = psi.psi[1] = psi.psi[2] = 0.0;
    CHECK(genericity_rank(reconstruct_weyl(psi, f), f) == 4);
    psi.psi[3] = 0.0;
    CHECK(genericity_rank(reconstruct_weyl(psi, f), f) < 4);
  }
}
