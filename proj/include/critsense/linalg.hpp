#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace critsense {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = Vector<double>;
using Mat = Matrix<double>;

/// Eigenvalues of the symmetric part of a square matrix, ascending.
template <typename Derived>
Vector<typename Derived::Scalar> symmetric_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::hypot;
  if (m.rows() == 1) return Vector<Scalar>::Constant(1, m(0, 0));
  if (m.rows() == 2) {
    const Scalar b = (m(0, 1) + m(1, 0)) / Scalar(2);
    const Scalar mid = (m(0, 0) + m(1, 1)) / Scalar(2);
    const Scalar r = hypot((m(0, 0) - m(1, 1)) / Scalar(2), b);
    Vector<Scalar> out(2);
    out << mid - r, mid + r;
    return out;
  }
  const Matrix<Scalar> sym = (m + m.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

/// Spectral norm of a symmetric matrix (largest |eigenvalue|).
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return symmetric_eigenvalues(m).cwiseAbs().maxCoeff();
}

/// Smallest singular value of a symmetric matrix, i.e. 1/||m^{-1}||.
template <typename Derived>
typename Derived::Scalar smallest_singular_value(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return symmetric_eigenvalues(m).cwiseAbs().minCoeff();
}

/// ||m^{-1}|| in the spectral norm; +inf for singular input.
template <typename Derived>
typename Derived::Scalar inverse_spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Scalar smin = smallest_singular_value(m);
  return smin > 0 ? Scalar(1) / smin : std::numeric_limits<Scalar>::infinity();
}

template <typename Derived>
int count_negative_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  const auto eig = symmetric_eigenvalues(m);
  return static_cast<int>((eig.array() < 0).count());
}

/// Lexicographic ordering on coordinates; used to fix output order.
inline bool lexicographic_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace critsense
