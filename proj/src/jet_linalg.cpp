#include "c2e/jet_linalg.hpp"

namespace c2e {

Eigen::MatrixXd JetMatrix::constant_term() const {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = (*this)(i, j).value();
  return m;
}

JetMatrix JetMatrix::transpose() const {
  JetMatrix t(cols, rows, layout());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

JetMatrix operator*(const JetMatrix& x, const JetMatrix& y) {
  if (x.cols != y.rows) throw StructuralError("jet matrix product shape mismatch");
  const JetLayout& l = x.order() <= y.order() ? x.layout() : y.layout();
  JetMatrix r(x.rows, y.cols, l);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k)
      for (int j = 0; j < y.cols; ++j) r(i, j).add_product(x(i, k), y(k, j));
  return r;
}

JetMatrix operator+(const JetMatrix& x, const JetMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw StructuralError("jet matrix sum shape mismatch");
  JetMatrix r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
  return r;
}

JetMatrix operator-(const JetMatrix& x, const JetMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw StructuralError("jet matrix difference shape mismatch");
  JetMatrix r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
  return r;
}

JetMatrix inverse(const JetMatrix& m) {
  if (m.rows != m.cols) throw StructuralError("inverse of a non-square jet matrix");
  const int n = m.rows;
  const Eigen::MatrixXd m0 = m.constant_term();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m0);
  if (!lu.isInvertible()) throw NumericError("singular constant term in jet matrix inverse");
  const Eigen::MatrixXd inv0 = lu.inverse();

  const JetLayout& l = m.layout();
  JetMatrix base(n, n, l);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) base(i, j)[0] = inv0(i, j);

  // step = -M0^-1 N
  JetMatrix nil = m;
  for (auto& x : nil.a) x[0] = 0.0;
  JetMatrix step = base * nil;
  for (auto& x : step.a) x *= -1.0;

  JetMatrix result = base;
  JetMatrix term = base;
  for (int k = 1; k <= m.order(); ++k) {
    term = step * term;
    result = result + term;
  }
  return result;
}

JetMatrix least_squares_left_inverse(const JetMatrix& a) {
  const JetMatrix at = a.transpose();
  return inverse(at * a) * at;
}

namespace {

RealJet det_rec(const JetMatrix& m, std::vector<int>& cols, int row) {
  const int n = m.rows;
  if (row == n) return RealJet::constant(m.layout().dim(), m.order(), 1.0);
  RealJet sum(m.layout());
  int sign = 1;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const int col = cols[c];
    std::vector<int> rest = cols;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(c));
    RealJet minor = det_rec(m, rest, row + 1);
    RealJet term = m(row, col) * minor;
    if (sign > 0) sum += term;
    else sum -= term;
    sign = -sign;
  }
  return sum;
}

}  // namespace

RealJet determinant(const JetMatrix& m) {
  if (m.rows != m.cols) throw StructuralError("determinant of a non-square jet matrix");
  std::vector<int> cols(static_cast<std::size_t>(m.cols));
  for (int i = 0; i < m.cols; ++i) cols[static_cast<std::size_t>(i)] = i;
  return det_rec(m, cols, 0);
}

Eigen::VectorXd singular_values(const JetMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.constant_term());
  return svd.singularValues();
}

int numerical_rank(const JetMatrix& m, double rel_tol) {
  const Eigen::MatrixXd c = m.constant_term();
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(c).singularValues();
  const double scale = 1.0 + c.cwiseAbs().maxCoeff();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * scale) ++r;
  return r;
}

}  // namespace c2e
