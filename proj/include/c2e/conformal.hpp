#pragma once

// Conformally invariant operators built from a curvature pack.
//
// All sections are weight-1 tensors trivialised in the chart metric. Forms
// are fully covariant and antisymmetric; "hook" tensors t_{a1..ak b} are
// antisymmetric in the first k slots and lie in the image of cartan_project.

#include <optional>

#include "c2e/geometry.hpp"

namespace c2e {

enum class InversionMethod { None, PreferredV, LeastSquares };
const char* to_string(InversionMethod m);

enum class InversionRoute { Auto, PreferredV, LeastSquares };

struct GenericityReport {
  int rank = 0;                    // rank of v^d -> W_{abcd} v^d at the base point
  double smallest_singular = 0.0;
  double det_v = 0.0;              // det V_a^b, V_a^b = W_{cdea} W^{cdeb}
  double det_v_ratio = 0.0;        // |det V| / ‖V‖^n
  InversionMethod method = InversionMethod::None;
  bool generic = false;
  RealTensor wbar;                 // W̄^{abcd}, weight -2, W̄^{abce} W_{abcd} = δ^e_d
  double left_inverse_residual = 0.0;
};

/// Ratio |det V| / ‖V‖^n above which the preferred inversion is used.
inline constexpr double kPreferredInversionThreshold = 1e-8;

GenericityReport weyl_inversion(const CurvaturePack& pack, InversionRoute route = InversionRoute::Auto);

enum class Classification { OneSolutionCandidate, NoSolution, NotGeneric };
const char* to_string(Classification c);

struct ObstructionPack {
  RealTensor Z;    // Z_a = W̄^{rst}{}_a Y_{trs}
  RealTensor dZ;   // 2∇_{[a}Z_{b]}
  RealTensor Phi;  // ∇_{(a}Z_{b)0} - P_{(ab)0} - Z_{(a}Z_{b)0}
  double obstruction = 0.0;  // max(|dZ|, |Φ|) at the base point
  double scale = 1.0;        // 1 + |P| + |Z|^2 at the base point
  Classification classification = Classification::NotGeneric;
};

/// Relative tolerance of the one-solution test.
inline constexpr double kOneSolutionTolerance = 1e-8;

ObstructionPack obstruction_pack(const CurvaturePack& pack, const GenericityReport& report);

/// Everything the operators need at one point.
struct ConformalGeometry {
  CurvaturePack pack;
  GenericityReport inversion;
  std::optional<ObstructionPack> obstruction;

  const RealTensor& Z() const;
  const RealTensor& wbar() const;
};

ConformalGeometry conformal_geometry(CurvaturePack pack, InversionRoute route = InversionRoute::Auto);

/// σ ↦ (∇_{(a}∇_{b)0} + P_{(ab)0})σ.
RealTensor E0(const RealTensor& sigma, const CurvaturePack& pack);
/// τ ↦ (k+1) Pr_⊠ ∇_{[a0} τ_{a1..ak] b} for a hook tensor with k antisymmetric slots.
RealTensor Ek(const RealTensor& tau, const CurvaturePack& pack);
/// ∇̃σ = ∇σ + Zσ.
RealTensor nabla_tilde(const RealTensor& sigma, const ConformalGeometry& geo);
/// d̃τ = (k+1)(∇_{[a0}τ_{a1..ak]} + Z_{[a0}τ_{a1..ak]}); for k = 0 this is ∇̃.
RealTensor d_tilde(const RealTensor& tau, const RealTensor& gamma, const RealTensor& Z);
RealTensor d_tilde(const RealTensor& tau, const ConformalGeometry& geo);
/// ∇_{(a}τ_{b)0} - Z_{(a}τ_{b)0}.
RealTensor D1(const RealTensor& tau, const ConformalGeometry& geo);
/// 2W̄^{rst}{}_a ∇_{[r}τ_{s]t}.
RealTensor C1(const RealTensor& tau, const ConformalGeometry& geo);
/// Pr_⊠(∇_a - 2Z_a)τ_{bc}, antisymmetric in the last two slots.
RealTensor Dbar(const RealTensor& tau, const ConformalGeometry& geo);
/// -½ W̄^{rsp}{}_a D̄(ψ)_{prs}.
RealTensor H1prime(const RealTensor& psi, const ConformalGeometry& geo);

/// Contraction of the last three slots of an upper W̄-type tensor against a
/// covariant 3-tensor, lowered: W̄^{rst}{}_a x_{rst}.
RealTensor wbar_contract(const RealTensor& wbar, const RealTensor& x, const MetricPair<double>& metric);

/// Left inverse of E0 on charts where the obstruction does not vanish:
/// H0(τ) = ζ·(d̃C1τ) + η·((D1C1 - id)τ) with
/// (ζ, η) = (dZ, Φ) / (|dZ|² + |Φ|²) in the Euclidean fibre metric.
struct NoSolutionData {
  RealTensor zeta;
  RealTensor eta;
  double normalisation_residual = 0.0;
};
NoSolutionData no_solution_data(const ConformalGeometry& geo);
RealTensor H0_nosol(const RealTensor& tau, const ConformalGeometry& geo, const NoSolutionData& data);

/// Three-dimensional variant: with F_{abc} = Y_{cab} = E1(E0(1)) and
/// ζ = F/|F|², H0(τ) = ζ·E1(τ).
struct CottonInverse {
  RealTensor zeta;
};
CottonInverse cotton_inverse(const CurvaturePack& pack);
RealTensor H0_cotton(const RealTensor& tau, const CurvaturePack& pack, const CottonInverse& inv);

/// Euclidean full contraction Σ x_I y_I as a rank-0 tensor of the given weight.
RealTensor euclidean_dot(const RealTensor& x, const RealTensor& y, double weight);

}  // namespace c2e
