#pragma once

// Metric charts and the Levi-Civita curvature pipeline.

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "c2e/jet_linalg.hpp"
#include "c2e/tensor.hpp"

namespace c2e {

using Coordinates = std::vector<RealJet>;
/// Row-major n*n metric components as functions of the coordinate jets.
using MetricFn = std::function<std::vector<RealJet>(const Coordinates&)>;
using ScalarFn = std::function<RealJet(const Coordinates&)>;

struct MetricChart {
  std::string name;
  int dim = 0;
  int positive = 0;  // signature (positive, negative)
  int negative = 0;
  std::vector<std::pair<double, double>> box;  // sampling window per coordinate
  MetricFn components;

  /// g_ab at `point` as a weight-2 tensor of jets of the given order.
  RealTensor metric(std::span<const double> point, int order) const;
};

/// Sparse polynomial in the coordinates.
struct Polynomial {
  struct Term {
    std::vector<int> powers;
    double coef;
  };
  std::vector<Term> terms;

  RealJet operator()(const Coordinates& x) const;
  /// All monomials of degree <= max_degree with uniform coefficients in
  /// [-amplitude, amplitude].
  static Polynomial random(int dim, int max_degree, double amplitude, std::uint64_t seed, std::uint64_t stream);
};

/// Levi-Civita curvature data at a point. Slot conventions:
///   gamma         Γ^a_{bc}            "udd"
///   riemann       R_{ab}{}^c{}_d      "ddud",  [∇_a,∇_b]v^c = R_{ab}{}^c{}_d v^d
///   ricci         Ric_{bd} = R_{ab}{}^a{}_d
///   schouten      P with Ric = (n-2)P + J g
///   cotton        Y_{abc} = ∇_b P_{ca} - ∇_c P_{ba}
///   weyl          W_{abcd} = R_{abcd} - (g⊙P)_{abcd}, R_{abcd} = g_{ce}R_{ab}{}^e{}_d
///   weyl_mixed    W_{ab}{}^c{}_d
/// Field orders: metric m, gamma m-1, curvature m-2, cotton m-3.
struct CurvaturePack {
  int dim = 0;
  int metric_order = 0;
  MetricPair<double> metric;
  RealTensor gamma;
  RealTensor riemann;
  RealTensor riemann_down;
  RealTensor ricci;
  RealTensor scalar;
  RealTensor J;
  RealTensor schouten;
  RealTensor cotton;
  RealTensor weyl;
  RealTensor weyl_mixed;
  RealTensor volume;  // sqrt|det g| dx^1 ∧ ... ∧ dx^n, weight n
};

struct PackOptions {
  bool check_invariants = true;
  double invariant_tol = 1e-8;
};

CurvaturePack curvature_pack(const MetricChart& chart, std::span<const double> point, int metric_order,
                             const PackOptions& opts = {});

/// Assembles a pack from metric jets already in hand.
CurvaturePack curvature_pack_from_metric(const RealTensor& g, const PackOptions& opts = {});

MetricPair<double> metric_pair(const RealTensor& g);

/// Γ^a_{bc} = ½ g^{ad}(∂_b g_{dc} + ∂_c g_{db} - ∂_d g_{bc}).
RealTensor christoffel(const MetricPair<double>& metric);

/// R_{ab}{}^c{}_d = ∂_aΓ^c_{bd} - ∂_bΓ^c_{ad} + Γ^c_{ae}Γ^e_{bd} - Γ^c_{be}Γ^e_{ad}.
RealTensor riemann_from_christoffel(const RealTensor& gamma);

/// Covariant derivative ∇_x t_{...}; the new slot is prepended. Weighted
/// tensors are trivialised in the current scale, so no weight term appears.
RealTensor covariant_derivative(const RealTensor& t, const RealTensor& gamma);

/// Formal partial derivative with the new slot prepended.
RealTensor partial_derivative(const RealTensor& t);

/// Cotton tensor from a Schouten tensor.
RealTensor cotton_from_schouten(const RealTensor& schouten, const RealTensor& gamma);

/// Totally trace-free part of a tensor with Riemann symmetries.
RealTensor weyl_tensor(const CurvaturePack& pack);

/// Relative residuals of the curvature invariants (Bianchi, symmetries,
/// tracelessness); each entry is (name, residual).
std::vector<std::pair<std::string, double>> curvature_invariants(const CurvaturePack& pack);

/// A conformal scale Υ; the rescaled metric is e^{2Υ}g.
struct ConformalScale {
  std::string name;
  ScalarFn upsilon;
};

ConformalScale random_scale(int dim, std::uint64_t seed);

MetricChart conformal_rescale(const MetricChart& chart, const ConformalScale& scale);

/// Components of a weight-w section in the rescaled trivialisation: e^{wΥ} t.
RealTensor transform_density(const RealTensor& t, const RealJet& upsilon, double w);

/// Υ as a jet at a point, and Υ_a = ∂_aΥ.
RealJet scale_jet(const ConformalScale& scale, std::span<const double> point, int order);
RealTensor scale_gradient(const RealJet& upsilon);

// ---- built-in charts ----

struct ChartInfo {
  std::string name;
  std::string description;
};

std::vector<ChartInfo> builtin_charts();

/// Looks up a chart by name. Seeded families accept a suffix, e.g.
/// "perturbed:7". Throws PreconditionError for unknown names.
MetricChart make_chart(const std::string& name);

}  // namespace c2e
