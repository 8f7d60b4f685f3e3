#pragma once

// Double-null frames and Newman-Penrose scalars for 4D Lorentzian Weyl
// tensors, with the Petrov filtration, the quadratic and cubic invariants and
// the matrix of v ↦ W_pqrs v^s in an adapted basis of hook tensors.

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "c2e/geometry.hpp"

namespace c2e {

using cplx = std::complex<double>;
using CVec4 = std::array<cplx, 4>;

/// Dense complex tensor on a 4-dimensional fibre; index (a, b, ...) is
/// row-major. Valence is tracked by the caller.
struct CTensor {
  int rank = 0;
  std::vector<cplx> c;

  CTensor() = default;
  explicit CTensor(int r) : rank(r), c(static_cast<std::size_t>(1) << (2 * r), cplx{}) {}
  cplx& at(std::initializer_list<int> idx);
  const cplx& at(std::initializer_list<int> idx) const;
  double max_abs() const;
  double max_imag() const;
  CTensor& operator+=(const CTensor& o);
  CTensor& operator*=(cplx s);
};

CTensor operator+(CTensor a, const CTensor& b);
CTensor operator-(CTensor a, const CTensor& b);
CTensor operator*(cplx s, CTensor a);
double max_abs_diff(const CTensor& a, const CTensor& b);

/// l, n real and m complex null vectors (contravariant components) with
/// g(l,n) = 1, g(m,m̄) = -1 and all other products zero. Boost weights
/// |l| = 1, |n| = -1; spin weights |m| = 1, |m̄| = -1.
struct NullFrame {
  CVec4 l, n, m;
  Eigen::Matrix4d g;     // metric the frame is adapted to
  Eigen::Matrix4d ginv;

  CVec4 mbar() const;
  /// Lowered frame covectors.
  CVec4 lower(const CVec4& v) const;
};

/// g_ab = l_a n_b + n_a l_b - m_a m̄_b - m̄_a m_b, the inverse of
/// g^ab = l^a n^b + n^a l^b - m^a m̄^b - m̄^a m^b.
Eigen::Matrix4d frame_metric(const CVec4& l, const CVec4& n, const CVec4& m);

/// Checks the product relations against g to `tol`; StructuralError otherwise.
NullFrame make_frame(const CVec4& l, const CVec4& n, const CVec4& m, const Eigen::Matrix4d& g, double tol = 1e-10);
/// Frame built from its own vectors (metric from frame_metric).
NullFrame make_frame(const CVec4& l, const CVec4& n, const CVec4& m);
/// l = (e0+e1)/√2, n = (e0-e1)/√2, m = (e2 + i e3)/√2 for g = diag(1,-1,-1,-1).
NullFrame canonical_frame();
/// l ↦ λl, n ↦ n/λ, m ↦ e^{iθ}m.
NullFrame boost_spin(const NullFrame& f, double lambda, double theta);

/// Largest product-relation defect of the frame.
double frame_defect(const NullFrame& f);

struct NPScalars {
  std::array<cplx, 5> psi{};
};

/// Ψ0 = -W(l,m,l,m), Ψ1 = -W(l,n,l,m), Ψ2 = -W(l,m,m̄,n), Ψ3 = -W(l,n,m̄,n),
/// Ψ4 = -W(n,m̄,n,m̄). W is covariant; StructuralError if it is not
/// trace-free with Riemann symmetries.
NPScalars np_scalars(const CTensor& W, const NullFrame& f);
CTensor reconstruct_weyl(const NPScalars& psi, const NullFrame& f);

/// Largest violation of pair antisymmetry, pair exchange, first Bianchi and
/// tracelessness, relative to 1 + |W|.
double weyl_symmetry_defect(const CTensor& W, const Eigen::Matrix4d& ginv);

/// Covariant Weyl tensor of a metric pack at its base point.
CTensor weyl_at_point(const CurvaturePack& pack);

// ---- products ----
/// (AB)_pr = A_(p B_r) for covectors.
CTensor sym_prod(const CVec4& a, const CVec4& b);
/// Kulkarni-Nomizu product of two symmetric 2-tensors.
CTensor kn_prod(const CTensor& a, const CTensor& b);
/// (A ∧ B)_pqr = A_pr B_q - A_qr B_p.
CTensor wedge_prod(const CTensor& a, const CVec4& b);

// ---- invariants ----
double quadratic_invariant(const CTensor& W, const Eigen::Matrix4d& ginv);
/// 16 Re(Ψ0Ψ4 - 4Ψ1Ψ3 + 3Ψ2²).
double np_quadratic(const NPScalars& psi);

struct CubicInvariants {
  CTensor W2;   // W_rsab W^rs_cd, covariant
  CTensor V3;   // V3_a^b = W_rs^tb W^rs_pq W^pq_ta, slots (a, b)
  cplx trace;   // V3_r^r
};
CubicInvariants cubic_invariants(const CTensor& W, const Eigen::Matrix4d& ginv);

/// W̄^{pqtb} = 4 W_rs^{tb} W^{rspq} / V3_r^r, a left inverse of the Weyl map
/// whenever |W|² = 0 and the cubic trace does not vanish. NumericError if the
/// trace vanishes.
CTensor cubic_inversion(const CTensor& W, const Eigen::Matrix4d& ginv, double tol = 1e-12);

enum class PetrovType { I, II, III, N, O, General };
const char* to_string(PetrovType t);
/// Deepest filtration level of the frame components within `tol`.
PetrovType petrov_classify(const NPScalars& psi, double tol = 1e-12);

// ---- hook basis and the Weyl map ----
/// The 16 covariant tensors spanning H_pqr[2] (H_(pq)r = H_[pqr] = 0,
/// trace-free), ordered by boost weight -2, -1, 0, 1, 2.
std::vector<CTensor> hook_basis(const NullFrame& f);
const std::array<int, 16>& hook_basis_boost_weights();
/// Boost weights of the coordinates (v_n, v_m̄, v_m, v_l).
const std::array<int, 4>& vector_boost_weights();

struct WeylMap {
  Eigen::Matrix<cplx, 16, 4> matrix;
  double projection_residual = 0.0;
};

/// Matrix of v ↦ W_pqrs v^s with v = v_n n + v_m̄ m̄ + v_m m + v_l l, in the
/// hook basis. StructuralError if some image leaves the basis span.
WeylMap weyl_map_matrix(const CTensor& W, const NullFrame& f, double tol = 1e-9);
int genericity_rank(const CTensor& W, const NullFrame& f);

/// Ψ2 of the Schwarzschild chart at a point, using the static double-null
/// frame of the metric with overall sign flipped to match the frame products.
NPScalars schwarzschild_np(std::span<const double> point);

/// Orthonormal-derived null frame for a metric of signature (+---):
/// Gram-Schmidt on the coordinate basis (first timelike coordinate vector
/// in front; eigenvectors of g if that degenerates), then l, n = (e0 ± e1)/√2
/// and m = (e2 + i e3)/√2.
NullFrame adapted_frame(const Eigen::Matrix4d& g);

struct PointNP {
  NullFrame frame;
  CTensor weyl;  // covariant, for the metric the frame is adapted to
  NPScalars psi;
};

/// NP data of a 4D Lorentzian chart at a point. Charts of signature (-+++)
/// are analysed through -g. PreconditionError for other signatures.
PointNP np_at_point(const MetricChart& chart, std::span<const double> point);

}  // namespace c2e
