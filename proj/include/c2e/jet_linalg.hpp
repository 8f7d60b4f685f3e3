#pragma once

// Small dense matrices of real jets.

#include <Eigen/Dense>

#include "c2e/jet.hpp"

namespace c2e {

/// Row-major rows x cols matrix of jets sharing one layout.
struct JetMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<RealJet> a;

  JetMatrix() = default;
  JetMatrix(int r, int c, const JetLayout& layout) : rows(r), cols(c), a(static_cast<std::size_t>(r * c), RealJet(layout)) {}

  RealJet& operator()(int i, int j) { return a[static_cast<std::size_t>(i * cols + j)]; }
  const RealJet& operator()(int i, int j) const { return a[static_cast<std::size_t>(i * cols + j)]; }
  int order() const { return a.front().order(); }
  const JetLayout& layout() const { return a.front().layout(); }

  Eigen::MatrixXd constant_term() const;
  JetMatrix transpose() const;
};

JetMatrix operator*(const JetMatrix& x, const JetMatrix& y);
JetMatrix operator+(const JetMatrix& x, const JetMatrix& y);
JetMatrix operator-(const JetMatrix& x, const JetMatrix& y);

/// Inverse of a square jet matrix: the constant term is inverted numerically
/// and the nilpotent part by the terminating series
///   M^-1 = sum_k (-M0^-1 N)^k M0^-1,  M = M0 + N.
/// Throws NumericError when the constant term is singular.
JetMatrix inverse(const JetMatrix& m);

/// Left inverse (A^T A)^-1 A^T of a tall jet matrix with full column rank.
JetMatrix least_squares_left_inverse(const JetMatrix& a);

/// Determinant by cofactor expansion (n <= 4 in practice).
RealJet determinant(const JetMatrix& m);

/// Singular values of the constant term, descending.
Eigen::VectorXd singular_values(const JetMatrix& m);

/// Numerical rank of the constant term: singular values above
/// rel_tol * (1 + largest |entry|).
int numerical_rank(const JetMatrix& m, double rel_tol = 1e-9);

}  // namespace c2e
