#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "c2e/geometry.hpp"

namespace c2e {

namespace {

std::vector<RealJet> diagonal(const Coordinates& x, const std::vector<RealJet>& d) {
  const std::size_t n = x.size();
  std::vector<RealJet> c(n * n, RealJet(x.front().layout()));
  for (std::size_t i = 0; i < n; ++i) c[i * n + i] = d[i];
  return c;
}

MetricChart flat_chart(const std::string& name, int dim, int negative) {
  MetricChart c;
  c.name = name;
  c.dim = dim;
  c.positive = dim - negative;
  c.negative = negative;
  c.box.assign(static_cast<std::size_t>(dim), {-1.0, 1.0});
  c.components = [dim, negative](const Coordinates& x) {
    std::vector<RealJet> d;
    for (int i = 0; i < dim; ++i)
      d.push_back(RealJet::constant(x.front().dim(), x.front().order(), i < negative ? -1.0 : 1.0));
    return diagonal(x, d);
  };
  return c;
}

ConformalScale fixed_scale() {
  Polynomial p;
  p.terms = {{{1, 0, 0, 0}, 0.3}, {{0, 1, 1, 0}, -0.2}, {{0, 0, 0, 2}, 0.1}, {{1, 1, 0, 1}, 0.05}};
  return {"fixed-scale", [p](const Coordinates& x) { return p(x); }};
}

MetricChart s2xs2_chart() {
  MetricChart c;
  c.name = "s2xs2";
  c.dim = 4;
  c.positive = 4;
  c.box.assign(4, {-1.0, 1.0});
  c.components = [](const Coordinates& x) {
    // unit round metric 4/(1+|y|^2)^2 |dy|^2 on each stereographic factor
    const RealJet one = RealJet::constant(4, x.front().order(), 1.0);
    const RealJet f1 = 4.0 * reciprocal(pow(one + x[0] * x[0] + x[1] * x[1], 2.0));
    const RealJet f2 = 4.0 * reciprocal(pow(one + x[2] * x[2] + x[3] * x[3], 2.0));
    return diagonal(x, {f1, f1, f2, f2});
  };
  return c;
}

MetricChart schwarzschild_chart() {
  MetricChart c;
  c.name = "schwarzschild";
  c.dim = 4;
  c.positive = 3;
  c.negative = 1;
  c.box = {{0.0, 1.0}, {3.0, 10.0}, {0.6, 2.5}, {0.0, 2.0 * std::numbers::pi}};
  c.components = [](const Coordinates& x) {
    constexpr double mass = 1.0;
    const RealJet& r = x[1];
    const RealJet f = 1.0 - (2.0 * mass) * reciprocal(r);
    const RealJet s = sin(x[2]);
    return diagonal(x, {-f, reciprocal(f), r * r, r * r * s * s});
  };
  return c;
}

bool positive_definite_on_box(const MetricChart& c) {
  const int n = c.dim;
  const int corners = 1 << n;
  for (int k = 0; k <= corners; ++k) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto [lo, hi] = c.box[static_cast<std::size_t>(i)];
      p[static_cast<std::size_t>(i)] = k == corners ? 0.5 * (lo + hi) : ((k >> i) & 1 ? hi : lo);
    }
    const RealTensor g = c.metric(p, 0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g.at({i, j}).value();
    if (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff() < 0.3) return false;
  }
  return true;
}

MetricChart perturbed_chart(const std::string& family, int dim, std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::vector<Polynomial> h;
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b)
        h.push_back(Polynomial::random(dim, 3, 0.1, seed, attempt * 100 + static_cast<std::uint64_t>(a * dim + b)));
    MetricChart c;
    c.name = family + ":" + std::to_string(seed);
    c.dim = dim;
    c.positive = dim;
    c.box.assign(static_cast<std::size_t>(dim), {-0.3, 0.3});
    c.components = [h, dim](const Coordinates& x) {
      std::vector<RealJet> comps(static_cast<std::size_t>(dim * dim), RealJet(x.front().layout()));
      std::size_t k = 0;
      for (int a = 0; a < dim; ++a)
        for (int b = a; b < dim; ++b) {
          RealJet v = h[k++](x);
          if (a == b) v += 1.0;
          comps[static_cast<std::size_t>(a * dim + b)] = v;
          comps[static_cast<std::size_t>(b * dim + a)] = v;
        }
      return comps;
    };
    if (positive_definite_on_box(c)) return c;
  }
}

std::uint64_t parse_seed(const std::string& name, std::size_t colon) {
  if (colon == std::string::npos) return 1;
  const std::string s = name.substr(colon + 1);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw PreconditionError("bad chart seed in '" + name + "'");
  }
  if (used != s.size()) throw PreconditionError("bad chart seed in '" + name + "'");
  return v;
}

}  // namespace

std::vector<ChartInfo> builtin_charts() {
  return {
      {"flat", "4D Euclidean space"},
      {"flat-lorentz", "4D Minkowski space, signature (-+++)"},
      {"flat3", "3D Euclidean space"},
      {"conf-flat", "4D conformally flat metric e^{2u} delta with polynomial u"},
      {"s2xs2", "product of unit spheres in stereographic coordinates (Einstein)"},
      {"s2xs2-conf", "conformal rescaling of s2xs2 (Einstein scale not the chart metric)"},
      {"schwarzschild", "Schwarzschild exterior, M = 1, coordinates (t, r, theta, phi)"},
      {"perturbed[:seed]", "4D delta + h, h symmetric cubic polynomial with coefficients in [-0.1, 0.1]"},
      {"perturbed3[:seed]", "3D analogue of perturbed"},
      {"perturbed2[:seed]", "2D analogue of perturbed (projective use only)"},
  };
}

MetricChart make_chart(const std::string& name) {
  const std::size_t colon = name.find(':');
  const std::string family = name.substr(0, colon);
  if (colon != std::string::npos && family != "perturbed" && family != "perturbed3" && family != "perturbed2")
    throw PreconditionError("chart '" + family + "' takes no seed");
  if (family == "flat") return flat_chart("flat", 4, 0);
  if (family == "flat-lorentz") return flat_chart("flat-lorentz", 4, 1);
  if (family == "flat3") return flat_chart("flat3", 3, 0);
  if (family == "conf-flat") {
    MetricChart c = conformal_rescale(flat_chart("flat", 4, 0), fixed_scale());
    c.name = "conf-flat";
    return c;
  }
  if (family == "s2xs2") return s2xs2_chart();
  if (family == "s2xs2-conf") {
    MetricChart c = conformal_rescale(s2xs2_chart(), fixed_scale());
    c.name = "s2xs2-conf";
    return c;
  }
  if (family == "schwarzschild") return schwarzschild_chart();
  if (family == "perturbed") return perturbed_chart(family, 4, parse_seed(name, colon));
  if (family == "perturbed3") return perturbed_chart(family, 3, parse_seed(name, colon));
  if (family == "perturbed2") return perturbed_chart(family, 2, parse_seed(name, colon));
  throw PreconditionError("unknown chart '" + name + "'");
}

}  // namespace c2e
