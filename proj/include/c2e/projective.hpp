#pragma once

// Projective structures: special torsion-free connections, their Schouten,
// Cotton and Weyl tensors, and the projective-to-Ricci-flat operator zoo.
//
// Conventions: Γ^a_{bc} "udd"; R_{ab}{}^c{}_d as for metrics;
// Ric_{bd} = R_{ab}{}^a{}_d = (n-1)P_{bd}; Y_{abc} = ∇_b P_{ca} - ∇_c P_{ba};
// W_{ab}{}^c{}_d = R_{ab}{}^c{}_d - δ^c_a P_{bd} + δ^c_b P_{ad}.
// A weight-w density trivialised by the parallel volume form picks up e^{wΥ}
// under Γ ↦ Γ + δΥ + δΥ, and that volume form scales by e^{(n+1)Υ}.

#include <memory>
#include <optional>

#include "c2e/conformal.hpp"
#include "c2e/harness.hpp"

namespace c2e {

/// Levi-Civita connection of a metric chart, optionally changed by the exact
/// form Υ_a = ∂_aΥ: Γ̂^a_{bc} = Γ^a_{bc} + δ^a_b Υ_c + δ^a_c Υ_b.
struct ProjectiveChart {
  std::string name;
  MetricChart base;
  std::optional<ConformalScale> change;

  int dim() const { return base.dim; }
  /// Γ at `point`; jets of order metric_order - 1.
  RealTensor connection(std::span<const double> point, int metric_order) const;
  /// Parallel volume density: sqrt|det g|, times e^{(n+1)Υ} when changed.
  RealJet volume(std::span<const double> point, int metric_order) const;
};

/// Any metric chart name gives its Levi-Civita class; the suffix "+shift"
/// applies a fixed projective change, e.g. "schwarzschild+shift".
ProjectiveChart make_projective_chart(const std::string& name);
ProjectiveChart projective_change(const ProjectiveChart& chart, const ConformalScale& scale);

struct ProjectivePack {
  int dim = 0;
  RealTensor gamma;
  RealTensor riemann;  // "ddud"
  RealTensor ricci;
  RealTensor schouten;
  RealTensor cotton;
  RealTensor weyl;     // "ddud"
  RealJet volume;
};

/// Throws NumericError if the connection is not special (Ricci not
/// symmetric or the volume not parallel) and checks the Weyl traces.
ProjectivePack projective_pack(const ProjectiveChart& chart, std::span<const double> point, int metric_order,
                               double tol = 1e-8);
ProjectivePack projective_pack_from_connection(const RealTensor& gamma, const RealJet& volume, double tol = 1e-8);

struct ProjectiveGeometry {
  ProjectivePack pack;
  int rank = 0;  // rank of τ_c ↦ W_{ab}{}^c{}_d τ_c
  double smallest_singular = 0.0;
  bool generic = false;
  RealTensor wbar;  // W̄^{ab}{}_e{}^d, "uudu"
  double left_inverse_residual = 0.0;
  RealTensor Z;     // -W̄^{rs}{}_a{}^t Y_{trs}
  RealTensor dZ;
  RealTensor Phi;   // ∇_(a Z_b) - P_ab - Z_a Z_b
  double obstruction = 0.0;
  double scale = 1.0;
  Classification classification = Classification::NotGeneric;
};

ProjectiveGeometry projective_geometry(ProjectivePack pack);

// ---- operators; sections are weight-1 and all indices are down ----

/// (∇_a∇_b + P_ab)σ.
RealTensor E0_proj(const RealTensor& sigma, const ProjectivePack& pack);
/// (k+1) Pr ∇_{[a0}τ_{a1..ak] b}; Pr removes the totally antisymmetric part.
RealTensor Ek_proj(const RealTensor& tau, const ProjectivePack& pack);
RealTensor d_tilde_proj(const RealTensor& tau, const ProjectiveGeometry& geo);
/// ∇_(a τ_b) - Z_(a τ_b).
RealTensor D1_proj(const RealTensor& tau, const ProjectiveGeometry& geo);
/// -2 W̄^{rs}{}_a{}^t ∇_[r τ_s]t.
RealTensor C1_proj(const RealTensor& tau, const ProjectiveGeometry& geo);
/// Pr (∇_a - 2Z_a) ψ_bc.
RealTensor Dbar_proj(const RealTensor& psi, const ProjectiveGeometry& geo);
/// ½ W̄^{rs}{}_a{}^p (D̄ψ)_prs.
RealTensor H1prime_proj(const RealTensor& psi, const ProjectiveGeometry& geo);
/// W̄^{rs}{}_a{}^p x_{rsp}.
RealTensor wbar_contract_proj(const RealTensor& wbar, const RealTensor& x);

OperatorZoo projective_zoo(std::shared_ptr<const ProjectiveGeometry> geo, int section_order);

/// One-solution complex with V1 = E_(ab)[1]; needs n >= 3, a generic
/// connection and vanishing obstruction.
EquivalenceData build_onesol_proj_complex(const ProjectiveChart& chart, const std::vector<double>& point,
                                          int metric_order, int section_order);

/// Surface case: with F_abd = Y_dab and ζ = F/|F|², H0 = ζ·E1 inverts E0.
EquivalenceData build_nosol_proj_complex(const ProjectiveChart& chart, const std::vector<double>& point,
                                         int metric_order, int section_order);

}  // namespace c2e
