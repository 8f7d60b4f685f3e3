#include <doctest.h>

#include <Eigen/Dense>

#include "c2e/tensor.hpp"
#include "test_support.hpp"

using namespace c2e;
using c2e::testing::euclidean_metric;
using c2e::testing::random_tensor;

namespace {

// A random symmetric positive-definite metric (constant plus a small jet tail).
MetricPair<double> random_metric(int dim, int order, std::mt19937_64& rng) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(dim, dim);
  Eigen::MatrixXd m = a * a.transpose() + dim * Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd inv = m.inverse();
  RealTensor g = RealTensor::zeros(dim, "dd", 2.0, dim, order);
  RealTensor gi = RealTensor::zeros(dim, "uu", -2.0, dim, order);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      g.at({i, j})[0] = m(i, j);
      gi.at({i, j})[0] = inv(i, j);
    }
  (void)rng;
  return {g, gi};
}

RealTensor basis_tensor(int dim, int rank, std::size_t flat) {
  RealTensor t = RealTensor::zeros(dim, std::string(static_cast<std::size_t>(rank), 'd'), 0.0, dim, 0);
  t[flat][0] = 1.0;
  return t;
}

}  // namespace

TEST_CASE("antisymmetrising a symmetric tensor gives zero") {
  std::mt19937_64 rng(1);
  const RealTensor t = random_tensor(4, "dd", 0.0, 2, rng);
  const RealTensor s = symmetrize(t, {0, 1});
  CHECK(antisymmetrize(s, {0, 1}).max_abs() < 1e-15);
  CHECK(max_abs_diff(symmetrize(s, {0, 1}), s) < 1e-15);
}

TEST_CASE("antisymmetrising a single off-diagonal entry") {
  RealTensor t = RealTensor::zeros(2, "dd", 0.0, 2, 0);
  t.at({0, 1})[0] = 1.0;
  const RealTensor a = antisymmetrize(t, {0, 1});
  CHECK(a.at({0, 1})[0] == doctest::Approx(0.5));
  CHECK(a.at({1, 0})[0] == doctest::Approx(-0.5));
}

TEST_CASE("mixed variance slots cannot be symmetrised") {
  std::mt19937_64 rng(2);
  const RealTensor t = random_tensor(3, "ud", 0.0, 1, rng);
  CHECK_THROWS_AS(symmetrize(t, {0, 1}), StructuralError);
}

TEST_CASE("trace-free parts") {
  const auto g = euclidean_metric(4, 2);
  CHECK(trace_free_part(g.g, g).max_abs() < 1e-15);

  RealTensor t = RealTensor::zeros(4, "dd", 1.0, 4, 2);
  t.at({0, 0})[0] = 2.0;
  const RealTensor f = trace_free_part(t, g);
  CHECK(f.at({0, 0})[0] == doctest::Approx(1.5));
  for (int i = 1; i < 4; ++i) CHECK(f.at({i, i})[0] == doctest::Approx(-0.5));

  std::mt19937_64 rng(4);
  const auto m = random_metric(4, 3, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const RealTensor r = symmetrize(random_tensor(4, "dd", 1.0, 3, rng), {0, 1});
    const RealTensor tf = trace_free_part(r, m);
    CHECK(trace(tf, 0, 1, &m).max_abs() < 1e-12);
    CHECK(max_abs_diff(trace_free_part(tf, m), tf) < 1e-12);
  }
}

TEST_CASE("trace over like slots needs a metric") {
  std::mt19937_64 rng(5);
  const RealTensor t = random_tensor(3, "dd", 0.0, 1, rng);
  CHECK_THROWS_AS(trace(t, 0, 1, nullptr), StructuralError);
  const RealTensor u = random_tensor(3, "ud", 0.0, 1, rng);
  CHECK(trace(u, 0, 1, nullptr).rank() == 0);
}

TEST_CASE("raise then lower restores the tensor and its weight") {
  std::mt19937_64 rng(6);
  const auto m = random_metric(4, 2, rng);
  const RealTensor t = random_tensor(4, "ddd", 1.0, 2, rng);
  const RealTensor up = raise(t, 1, m.ginv);
  CHECK(up.weight() == -1.0);
  const RealTensor back = lower(up, 1, m.g);
  CHECK(back.weight() == 1.0);
  CHECK(max_abs_diff(back, t) < 1e-12);
}

TEST_CASE("einsum checks index placement") {
  std::mt19937_64 rng(7);
  const RealTensor a = random_tensor(3, "dd", 0.0, 1, rng);
  const RealTensor b = random_tensor(3, "dd", 0.0, 1, rng);
  CHECK_THROWS_AS(einsum("ab,bc->ac", a, b), StructuralError);
  const RealTensor c = random_tensor(3, "du", 0.0, 1, rng);
  const RealTensor p = einsum("ab,bc->ac", c, b);
  double expect = 0.0;
  for (int k = 0; k < 3; ++k) expect += c.at({1, k})[0] * b.at({k, 2})[0];
  CHECK(p.at({1, 2})[0] == doctest::Approx(expect));
}

TEST_CASE("Cartan projection in dimension 4, k = 2, has rank 16") {
  const int n = 4;
  const auto m = euclidean_metric(n, 0);
  Eigen::MatrixXd proj(64, 64);
  for (std::size_t f = 0; f < 64; ++f) {
    // project the antisymmetrised basis tensor
    const RealTensor e = antisymmetrize(basis_tensor(n, 3, f), {0, 1});
    const RealTensor p = cartan_project(e, 2, &m, Flavor::Conformal);
    for (std::size_t r = 0; r < 64; ++r) proj(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f)) = p[r][0];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(proj);
  lu.setThreshold(1e-10);
  CHECK(lu.rank() == 16);
}

TEST_CASE("Cartan projection: annihilation, idempotence and the complement") {
  std::mt19937_64 rng(8);
  for (int k = 1; k <= 3; ++k) {
    const int n = 4;
    const auto m = random_metric(n, 2, rng);
    for (int trial = 0; trial < 100; ++trial) {
      RealTensor t = random_tensor(n, std::string(static_cast<std::size_t>(k + 1), 'd'), 1.0, 1, rng);
      if (k >= 2) t = antisymmetrize(t, slot_range(0, k));
      const RealTensor p = cartan_project(t, k, &m, Flavor::Conformal);
      const double scale = 1.0 + p.max_abs();
      CHECK(antisymmetrize(p, slot_range(0, k + 1)).max_abs() / scale < 1e-12);
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j <= k; ++j) CHECK(trace(p, i, j, &m).max_abs() / scale < 1e-12);
      CHECK(max_abs_diff(cartan_project(p, k, &m, Flavor::Conformal), p) / scale < 1e-12);
      const RealTensor alt = antisymmetrize(t, slot_range(0, k + 1));
      CHECK(cartan_project(alt, k, &m, Flavor::Conformal).max_abs() < 1e-12);
    }
  }
}

TEST_CASE("projective Cartan projection only removes the alternating part") {
  std::mt19937_64 rng(9);
  const RealTensor t = antisymmetrize(random_tensor(3, "ddd", 1.0, 1, rng), {0, 1});
  const RealTensor p = cartan_project(t, 2, nullptr, Flavor::Projective);
  CHECK(max_abs_diff(p, t - antisymmetrize(t, {0, 1, 2})) < 1e-15);
}

TEST_CASE("Cartan projection rejects inputs that are not antisymmetric") {
  std::mt19937_64 rng(10);
  const auto m = euclidean_metric(3, 1);
  const RealTensor t = random_tensor(3, "ddd", 1.0, 1, rng);
  CHECK_THROWS_AS(cartan_project(t, 2, &m, Flavor::Conformal), StructuralError);
}

TEST_CASE("Kulkarni-Nomizu product") {
  std::mt19937_64 rng(11);
  const auto m = random_metric(4, 1, rng);
  const RealTensor gg = kn_product(m.g, m.g);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) {
          const double expect = 2.0 * (m.g.at({p, r})[0] * m.g.at({q, s})[0] - m.g.at({q, r})[0] * m.g.at({p, s})[0]);
          CHECK(gg.at({p, q, r, s})[0] == doctest::Approx(expect));
        }
  for (int trial = 0; trial < 20; ++trial) {
    const RealTensor a = symmetrize(random_tensor(4, "dd", 0.0, 2, rng), {0, 1});
    const RealTensor b = symmetrize(random_tensor(4, "dd", 0.0, 2, rng), {0, 1});
    const RealTensor k = kn_product(a, b);
    CHECK(max_abs_diff(k, -permute(k, {1, 0, 2, 3})) < 1e-13);
    CHECK(max_abs_diff(k, -permute(k, {0, 1, 3, 2})) < 1e-13);
    CHECK(max_abs_diff(k, permute(k, {2, 3, 0, 1})) < 1e-13);
  }
}

TEST_CASE("special wedge product of a symmetric tensor and a covector") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const RealTensor a = symmetrize(random_tensor(4, "dd", 0.0, 1, rng), {0, 1});
    const RealTensor b = random_tensor(4, "d", 0.0, 1, rng);
    const RealTensor w = wedge_product(a, b);
    CHECK(symmetrize(w, {0, 1}).max_abs() < 1e-14);
    CHECK(antisymmetrize(w, {0, 1, 2}).max_abs() < 1e-14);
  }
}

TEST_CASE("symmetric product") {
  std::mt19937_64 rng(13);
  const RealTensor a = random_tensor(3, "d", 0.0, 1, rng);
  const RealTensor b = random_tensor(3, "d", 0.0, 1, rng);
  const RealTensor s = sym_product(a, b);
  CHECK(s.at({0, 2})[0] == doctest::Approx(0.5 * (a[0][0] * b[2][0] + a[2][0] * b[0][0])));
}

TEST_CASE("property: projections are idempotent") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const RealTensor t = random_tensor(4, "ddd", 0.0, 2, rng);
    const RealTensor s = symmetrize(t, {0, 1, 2});
    const RealTensor a = antisymmetrize(t, {0, 2});
    CHECK(max_abs_diff(symmetrize(s, {0, 1, 2}), s) < 1e-12);
    CHECK(max_abs_diff(antisymmetrize(a, {0, 2}), a) < 1e-12);
  }
}
