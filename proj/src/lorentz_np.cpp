#include "c2e/lorentz_np.hpp"

#include <cmath>

namespace c2e {

namespace {

constexpr int N = 4;

std::size_t flat_index(std::initializer_list<int> idx) {
  std::size_t f = 0;
  for (int i : idx) f = f * N + static_cast<std::size_t>(i);
  return f;
}

cplx at4(const CTensor& t, int a, int b, int c, int d) { return t.c[static_cast<std::size_t>(((a * N + b) * N + c) * N + d)]; }
cplx& at4(CTensor& t, int a, int b, int c, int d) { return t.c[static_cast<std::size_t>(((a * N + b) * N + c) * N + d)]; }

/// Raises (or lowers) slot `s` of t with the 4x4 matrix m.
CTensor contract_slot(const CTensor& t, int s, const Eigen::Matrix4d& m) {
  CTensor r(t.rank);
  const std::size_t stride = static_cast<std::size_t>(1) << (2 * (t.rank - 1 - s));
  for (std::size_t f = 0; f < t.c.size(); ++f) {
    const int i = static_cast<int>((f / stride) % N);
    const std::size_t base = f - static_cast<std::size_t>(i) * stride;
    cplx acc{};
    for (int j = 0; j < N; ++j) acc += m(i, j) * t.c[base + static_cast<std::size_t>(j) * stride];
    r.c[f] = acc;
  }
  return r;
}

CTensor contract_slots(CTensor t, std::initializer_list<int> slots, const Eigen::Matrix4d& m) {
  for (int s : slots) t = contract_slot(t, s, m);
  return t;
}

cplx evaluate(const CTensor& w, const CVec4& a, const CVec4& b, const CVec4& c, const CVec4& d) {
  cplx s{};
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      for (int r = 0; r < N; ++r)
        for (int u = 0; u < N; ++u) s += at4(w, p, q, r, u) * a[p] * b[q] * c[r] * d[u];
  return s;
}

cplx dot(const Eigen::Matrix4d& g, const CVec4& a, const CVec4& b) {
  cplx s{};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s += g(i, j) * a[i] * b[j];
  return s;
}

CVec4 conj(const CVec4& v) {
  CVec4 r;
  for (int i = 0; i < N; ++i) r[i] = std::conj(v[i]);
  return r;
}

}  // namespace

cplx& CTensor::at(std::initializer_list<int> idx) { return c[flat_index(idx)]; }
const cplx& CTensor::at(std::initializer_list<int> idx) const { return c[flat_index(idx)]; }

double CTensor::max_abs() const {
  double m = 0.0;
  for (const auto& x : c) m = std::max(m, std::abs(x));
  return m;
}

double CTensor::max_imag() const {
  double m = 0.0;
  for (const auto& x : c) m = std::max(m, std::abs(x.imag()));
  return m;
}

CTensor& CTensor::operator+=(const CTensor& o) {
  if (o.rank != rank) throw StructuralError("complex tensor rank mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
  return *this;
}

CTensor& CTensor::operator*=(cplx s) {
  for (auto& x : c) x *= s;
  return *this;
}

CTensor operator+(CTensor a, const CTensor& b) { return a += b; }
CTensor operator-(CTensor a, const CTensor& b) { return a += cplx(-1.0) * b; }
CTensor operator*(cplx s, CTensor a) { return a *= s; }

double max_abs_diff(const CTensor& a, const CTensor& b) { return (a - b).max_abs(); }

// ---- frames ----

CVec4 NullFrame::mbar() const { return conj(m); }

CVec4 NullFrame::lower(const CVec4& v) const {
  CVec4 r{};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r[i] += g(i, j) * v[j];
  return r;
}

Eigen::Matrix4d frame_metric(const CVec4& l, const CVec4& n, const CVec4& m) {
  Eigen::Matrix4cd ginv;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      ginv(a, b) = l[a] * n[b] + n[a] * l[b] - m[a] * std::conj(m[b]) - std::conj(m[a]) * m[b];
  if (ginv.imag().cwiseAbs().maxCoeff() > 1e-12 * (1.0 + ginv.cwiseAbs().maxCoeff()))
    throw StructuralError("frame does not define a real metric");
  return ginv.real().inverse();
}

double frame_defect(const NullFrame& f) {
  const CVec4 mb = f.mbar();
  double d = 0.0;
  auto chk = [&](const CVec4& a, const CVec4& b, double want) { d = std::max(d, std::abs(dot(f.g, a, b) - want)); };
  chk(f.l, f.n, 1.0);
  chk(f.m, mb, -1.0);
  chk(f.l, f.l, 0.0);
  chk(f.n, f.n, 0.0);
  chk(f.m, f.m, 0.0);
  chk(f.l, f.m, 0.0);
  chk(f.n, f.m, 0.0);
  for (int i = 0; i < N; ++i) d = std::max({d, std::abs(f.l[i].imag()), std::abs(f.n[i].imag())});
  return d;
}

NullFrame make_frame(const CVec4& l, const CVec4& n, const CVec4& m, const Eigen::Matrix4d& g, double tol) {
  NullFrame f{l, n, m, g, g.inverse()};
  const double d = frame_defect(f);
  if (d > tol) throw StructuralError("null frame product relations violated by " + std::to_string(d));
  return f;
}

NullFrame make_frame(const CVec4& l, const CVec4& n, const CVec4& m) {
  return make_frame(l, n, m, frame_metric(l, n, m));
}

NullFrame canonical_frame() {
  const double s = 1.0 / std::sqrt(2.0);
  const CVec4 l{s, s, 0, 0}, n{s, -s, 0, 0}, m{0, 0, s, cplx(0, s)};
  return make_frame(l, n, m, Eigen::Vector4d(1, -1, -1, -1).asDiagonal().toDenseMatrix());
}

NullFrame boost_spin(const NullFrame& f, double lambda, double theta) {
  NullFrame r = f;
  const cplx ph = std::polar(1.0, theta);
  for (int i = 0; i < N; ++i) {
    r.l[i] = lambda * f.l[i];
    r.n[i] = f.n[i] / lambda;
    r.m[i] = ph * f.m[i];
  }
  return r;
}

// ---- products ----

CTensor sym_prod(const CVec4& a, const CVec4& b) {
  CTensor t(2);
  for (int p = 0; p < N; ++p)
    for (int r = 0; r < N; ++r) t.at({p, r}) = 0.5 * (a[p] * b[r] + a[r] * b[p]);
  return t;
}

CTensor kn_prod(const CTensor& a, const CTensor& b) {
  CTensor t(4);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      for (int r = 0; r < N; ++r)
        for (int s = 0; s < N; ++s)
          at4(t, p, q, r, s) = a.at({p, r}) * b.at({q, s}) - a.at({q, r}) * b.at({p, s}) -
                               a.at({p, s}) * b.at({q, r}) + a.at({q, s}) * b.at({p, r});
  return t;
}

CTensor wedge_prod(const CTensor& a, const CVec4& b) {
  CTensor t(3);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      for (int r = 0; r < N; ++r) t.at({p, q, r}) = a.at({p, r}) * b[q] - a.at({q, r}) * b[p];
  return t;
}

// ---- NP scalars ----

double weyl_symmetry_defect(const CTensor& W, const Eigen::Matrix4d& ginv) {
  double d = 0.0;
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      for (int r = 0; r < N; ++r)
        for (int s = 0; s < N; ++s) {
          const cplx w = at4(W, p, q, r, s);
          d = std::max(d, std::abs(w + at4(W, q, p, r, s)));
          d = std::max(d, std::abs(w + at4(W, p, q, s, r)));
          d = std::max(d, std::abs(w - at4(W, r, s, p, q)));
          d = std::max(d, std::abs(w + at4(W, q, r, p, s) + at4(W, r, p, q, s)));
        }
  for (int q = 0; q < N; ++q)
    for (int s = 0; s < N; ++s) {
      cplx tr{};
      for (int p = 0; p < N; ++p)
        for (int r = 0; r < N; ++r) tr += ginv(p, r) * at4(W, p, q, r, s);
      d = std::max(d, std::abs(tr));
    }
  return d / (1.0 + W.max_abs());
}

NPScalars np_scalars(const CTensor& W, const NullFrame& f) {
  if (W.rank != 4) throw StructuralError("NP scalars need a 4-tensor");
  if (weyl_symmetry_defect(W, f.ginv) > 1e-9) throw StructuralError("tensor does not have Weyl symmetries");
  const CVec4 mb = f.mbar();
  NPScalars s;
  s.psi[0] = -evaluate(W, f.l, f.m, f.l, f.m);
  s.psi[1] = -evaluate(W, f.l, f.n, f.l, f.m);
  s.psi[2] = -evaluate(W, f.l, f.m, mb, f.n);
  s.psi[3] = -evaluate(W, f.l, f.n, mb, f.n);
  s.psi[4] = -evaluate(W, f.n, mb, f.n, mb);
  return s;
}

CTensor reconstruct_weyl(const NPScalars& ps, const NullFrame& f) {
  const CVec4 l = f.lower(f.l), n = f.lower(f.n), m = f.lower(f.m), mb = f.lower(f.mbar());
  auto S = [](const CVec4& a, const CVec4& b) { return sym_prod(a, b); };
  const auto& p = ps.psi;
  CTensor w(4);
  w += -p[0] * kn_prod(S(n, n), S(mb, mb));
  w += -std::conj(p[0]) * kn_prod(S(n, n), S(m, m));
  w += 2.0 * p[1] * (kn_prod(S(n, n), S(l, mb)) + kn_prod(S(n, m), S(mb, mb)));
  w += 2.0 * std::conj(p[1]) * (kn_prod(S(n, n), S(l, m)) + kn_prod(S(n, mb), S(m, m)));
  w += -(p[2] + std::conj(p[2])) *
       (kn_prod(S(l, l), S(n, n)) + kn_prod(S(m, m), S(mb, mb)) - 2.0 * kn_prod(S(l, n), S(m, mb)));
  w += 2.0 * (p[2] - std::conj(p[2])) * (kn_prod(S(l, m), S(n, mb)) - kn_prod(S(l, mb), S(n, m)));
  w += 2.0 * std::conj(p[3]) * (kn_prod(S(l, l), S(n, mb)) + kn_prod(S(l, m), S(mb, mb)));
  w += 2.0 * p[3] * (kn_prod(S(l, l), S(n, m)) + kn_prod(S(l, mb), S(m, m)));
  w += -std::conj(p[4]) * kn_prod(S(l, l), S(mb, mb));
  w += -p[4] * kn_prod(S(l, l), S(m, m));
  if (weyl_symmetry_defect(w, f.ginv) > 1e-9) throw StructuralError("reconstructed tensor lacks Weyl symmetries");
  return w;
}

CTensor weyl_at_point(const CurvaturePack& pack) {
  if (pack.dim != 4) throw PreconditionError("NP analysis needs dimension 4");
  CTensor w(4);
  for (std::size_t i = 0; i < pack.weyl.size(); ++i) w.c[i] = pack.weyl[i].value();
  return w;
}

// ---- invariants ----

double quadratic_invariant(const CTensor& W, const Eigen::Matrix4d& ginv) {
  const CTensor up = contract_slots(W, {0, 1, 2, 3}, ginv);
  cplx s{};
  for (std::size_t i = 0; i < W.c.size(); ++i) s += W.c[i] * up.c[i];
  return s.real();
}

double np_quadratic(const NPScalars& s) {
  const auto& p = s.psi;
  return 16.0 * (p[0] * p[4] - 4.0 * p[1] * p[3] + 3.0 * p[2] * p[2]).real();
}

CubicInvariants cubic_invariants(const CTensor& W, const Eigen::Matrix4d& ginv) {
  const CTensor uudd = contract_slots(W, {0, 1}, ginv);
  const CTensor dduu = contract_slots(W, {2, 3}, ginv);
  CubicInvariants c{CTensor(4), CTensor(2), {}};
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int cc = 0; cc < N; ++cc)
        for (int d = 0; d < N; ++d) {
          cplx s{};
          for (int r = 0; r < N; ++r)
            for (int t = 0; t < N; ++t) s += at4(W, r, t, a, b) * at4(uudd, r, t, cc, d);
          at4(c.W2, a, b, cc, d) = s;
        }
  // V3_a^b = W_rs^tb W^rs_pq W^pq_ta = Σ dduu[rstb] (Σ uudd[rspq] uudd[pqta])
  CTensor m(4);  // m[r][s][t][a] = W^rs_pq W^pq_ta
  for (int r = 0; r < N; ++r)
    for (int s = 0; s < N; ++s)
      for (int t = 0; t < N; ++t)
        for (int a = 0; a < N; ++a) {
          cplx acc{};
          for (int p = 0; p < N; ++p)
            for (int q = 0; q < N; ++q) acc += at4(uudd, r, s, p, q) * at4(uudd, p, q, t, a);
          at4(m, r, s, t, a) = acc;
        }
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      cplx acc{};
      for (int r = 0; r < N; ++r)
        for (int s = 0; s < N; ++s)
          for (int t = 0; t < N; ++t) acc += at4(dduu, r, s, t, b) * at4(m, r, s, t, a);
      c.V3.at({a, b}) = acc;
    }
  for (int a = 0; a < N; ++a) c.trace += c.V3.at({a, a});
  return c;
}

CTensor cubic_inversion(const CTensor& W, const Eigen::Matrix4d& ginv, double tol) {
  const CubicInvariants ci = cubic_invariants(W, ginv);
  if (std::abs(ci.trace) <= tol * (1.0 + std::pow(W.max_abs(), 3)))
    throw NumericError("cubic Weyl invariant vanishes: no cubic inversion");
  const CTensor dduu = contract_slots(W, {2, 3}, ginv);
  const CTensor uuuu = contract_slots(W, {0, 1, 2, 3}, ginv);
  CTensor wbar(4);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      for (int t = 0; t < N; ++t)
        for (int b = 0; b < N; ++b) {
          cplx acc{};
          for (int r = 0; r < N; ++r)
            for (int s = 0; s < N; ++s) acc += at4(dduu, r, s, t, b) * at4(uuuu, r, s, p, q);
          at4(wbar, p, q, t, b) = 4.0 * acc / ci.trace;
        }
  return wbar;
}

const char* to_string(PetrovType t) {
  switch (t) {
    case PetrovType::I: return "I";
    case PetrovType::II: return "II";
    case PetrovType::III: return "III";
    case PetrovType::N: return "N";
    case PetrovType::O: return "O";
    case PetrovType::General: return "general";
  }
  return "?";
}

PetrovType petrov_classify(const NPScalars& s, double tol) {
  const auto& p = s.psi;
  auto z = [&](int i) { return std::abs(p[static_cast<std::size_t>(i)]) <= tol; };
  if (z(0) && z(1) && z(2) && z(3) && z(4)) return PetrovType::O;
  if (z(0) && z(1) && z(2) && z(3)) return PetrovType::N;
  if (z(0) && z(1) && z(2)) return PetrovType::III;
  if (z(0) && z(1)) return PetrovType::II;
  if (z(0)) return PetrovType::I;
  return PetrovType::General;
}

// ---- hook basis ----

std::vector<CTensor> hook_basis(const NullFrame& f) {
  const CVec4 l = f.lower(f.l), n = f.lower(f.n), m = f.lower(f.m), mb = f.lower(f.mbar());
  auto W = [](const CVec4& a, const CVec4& b, const CVec4& c) { return wedge_prod(sym_prod(a, b), c); };
  const cplx two = 2.0;
  return {
      W(n, n, mb), W(n, n, m),
      W(mb, mb, n), two * W(n, m, mb) + W(n, n, l), two * W(n, mb, m) + W(n, n, l), W(m, m, n),
      two * W(l, mb, n) + W(mb, mb, m), two * W(n, mb, l) + W(mb, mb, m),
      two * W(l, m, n) + W(m, m, mb), two * W(n, m, l) + W(m, m, mb),
      W(mb, mb, l), two * W(l, m, mb) + W(l, l, n), two * W(l, mb, m) + W(l, l, n), W(m, m, l),
      W(l, l, mb), W(l, l, m),
  };
}

const std::array<int, 16>& hook_basis_boost_weights() {
  static const std::array<int, 16> w{-2, -2, -1, -1, -1, -1, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2};
  return w;
}

const std::array<int, 4>& vector_boost_weights() {
  static const std::array<int, 4> w{-1, 0, 0, 1};
  return w;
}

WeylMap weyl_map_matrix(const CTensor& W, const NullFrame& f, double tol) {
  const auto basis = hook_basis(f);
  Eigen::Matrix<cplx, 64, 16> B;
  for (int k = 0; k < 16; ++k)
    for (int i = 0; i < 64; ++i) B(i, k) = basis[static_cast<std::size_t>(k)].c[static_cast<std::size_t>(i)];
  const auto qr = B.colPivHouseholderQr();
  const CVec4 cols[4] = {f.n, f.mbar(), f.m, f.l};
  WeylMap out;
  for (int j = 0; j < 4; ++j) {
    Eigen::Matrix<cplx, 64, 1> t;
    for (int p = 0; p < N; ++p)
      for (int q = 0; q < N; ++q)
        for (int r = 0; r < N; ++r) {
          cplx s{};
          for (int u = 0; u < N; ++u) s += at4(W, p, q, r, u) * cols[j][u];
          t((p * N + q) * N + r) = s;
        }
    const Eigen::Matrix<cplx, 16, 1> c = qr.solve(t);
    out.matrix.col(j) = c;
    const double res = (B * c - t).cwiseAbs().maxCoeff() / (1.0 + t.cwiseAbs().maxCoeff());
    out.projection_residual = std::max(out.projection_residual, res);
  }
  if (out.projection_residual > tol) throw StructuralError("Weyl image leaves the hook basis span");
  return out;
}

int genericity_rank(const CTensor& W, const NullFrame& f) {
  const WeylMap m = weyl_map_matrix(W, f);
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 16, 4>> svd(m.matrix);
  const auto sv = svd.singularValues();
  const double cut = 1e-9 * (1.0 + m.matrix.cwiseAbs().maxCoeff());
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

NPScalars schwarzschild_np(std::span<const double> point) {
  const MetricChart c = make_chart("schwarzschild");
  const CurvaturePack p = curvature_pack(c, point, 3);
  // frame products g(l,n) = 1, g(m,m̄) = -1 fit -g; W_abcd changes sign with g
  CTensor w = cplx(-1.0) * weyl_at_point(p);
  Eigen::Matrix4d g;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) g(a, b) = -p.metric.g.at({a, b}).value();
  const double r = point[1], th = point[2];
  const double fr = 1.0 - 2.0 / r;
  const double a = 1.0 / std::sqrt(2.0 * fr), b = std::sqrt(fr / 2.0), s = 1.0 / (std::sqrt(2.0) * r);
  const CVec4 l{a, b, 0, 0}, n{a, -b, 0, 0}, m{0, 0, s, cplx(0, s / std::sin(th))};
  return np_scalars(w, make_frame(l, n, m, g, 1e-9));
}

namespace {

// Gram-Schmidt in g; false if a seed degenerates or has the wrong causal type.
bool orthonormalise(std::array<Eigen::Vector4d, 4>& e, const Eigen::Matrix4d& g) {
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d& v = e[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) {
      const Eigen::Vector4d& u = e[static_cast<std::size_t>(j)];
      v -= (u.dot(g * v) / u.dot(g * u)) * u;
    }
    const double q = v.dot(g * v);
    if ((i == 0) != (q > 0) || std::abs(q) < 1e-8 * v.squaredNorm()) return false;
    v /= std::sqrt(std::abs(q));
  }
  return true;
}

}  // namespace

NullFrame adapted_frame(const Eigen::Matrix4d& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g);
  int pos = 0;
  for (int i = 0; i < 4; ++i)
    if (es.eigenvalues()(i) > 0) ++pos;
  if (pos != 1) throw PreconditionError("metric is not Lorentzian of signature (+---)");

  // coordinate basis, first timelike vector in front
  std::array<Eigen::Vector4d, 4> e;
  int t = -1;
  for (int i = 0; i < 4 && t < 0; ++i)
    if (g(i, i) > 0) t = i;
  bool ok = t >= 0;
  if (ok) {
    e[0] = Eigen::Vector4d::Unit(t);
    for (int i = 0, k = 1; i < 4; ++i)
      if (i != t) e[static_cast<std::size_t>(k++)] = Eigen::Vector4d::Unit(i);
    ok = orthonormalise(e, g);
  }
  if (!ok) {
    for (int i = 0, k = 1; i < 4; ++i) {
      if (es.eigenvalues()(i) > 0) e[0] = es.eigenvectors().col(i);
      else e[static_cast<std::size_t>(k++)] = es.eigenvectors().col(i);
    }
    if (!orthonormalise(e, g)) throw NumericError("could not build an orthonormal frame");
  }
  const double h = 1.0 / std::sqrt(2.0);
  CVec4 l{}, n{}, m{};
  for (int a = 0; a < 4; ++a) {
    l[a] = h * (e[0](a) + e[1](a));
    n[a] = h * (e[0](a) - e[1](a));
    m[a] = h * cplx(e[2](a), e[3](a));
  }
  return make_frame(l, n, m, g, 1e-9);
}

PointNP np_at_point(const MetricChart& chart, std::span<const double> point) {
  if (chart.dim != 4) throw PreconditionError("NP analysis needs dimension 4");
  const CurvaturePack p = curvature_pack(chart, point, 3);
  Eigen::Matrix4d g;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) g(a, b) = p.metric.g.at({a, b}).value();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g);
  int neg = 0;
  for (int i = 0; i < 4; ++i)
    if (es.eigenvalues()(i) < 0) ++neg;
  CTensor w = weyl_at_point(p);
  if (neg == 1) {
    g = -g;
    w *= -1.0;
  } else if (neg != 3) {
    throw PreconditionError("chart " + chart.name + " is not Lorentzian");
  }
  PointNP r{adapted_frame(g), w, {}};
  r.psi = np_scalars(w, r.frame);
  return r;
}

}  // namespace c2e
