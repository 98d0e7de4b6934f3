#pragma once

#include "critsense/domain.hpp"
#include "critsense/field.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace critsense {

/// Smooth bump exp(1 - 1/(1 - |s|^2)) on the open unit ball, zero elsewhere.
template <typename Derived>
typename Derived::Scalar bump(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  const Scalar u = s.squaredNorm();
  if (!(u < Scalar(1))) return Scalar(0);
  return std::exp(Scalar(1) - Scalar(1) / (Scalar(1) - u));
}

template <typename Scalar>
Vector<Scalar> bump_gradient(const Vector<Scalar>& s) {
  const Scalar u = s.squaredNorm();
  if (!(u < Scalar(1))) return Vector<Scalar>::Zero(s.size());
  const Scalar w = Scalar(1) / (Scalar(1) - u);
  const Scalar b = std::exp(Scalar(1) - w);
  return Scalar(-2) * b * w * w * s;
}

template <typename Scalar>
Matrix<Scalar> bump_hessian(const Vector<Scalar>& s) {
  const auto d = s.size();
  const Scalar u = s.squaredNorm();
  if (!(u < Scalar(1))) return Matrix<Scalar>::Zero(d, d);
  const Scalar w = Scalar(1) / (Scalar(1) - u);
  const Scalar b = std::exp(Scalar(1) - w);
  const Scalar w2 = w * w;
  return Scalar(-2) * b * ((Scalar(4) * w2 * w - Scalar(2) * w2 * w2) * (s * s.transpose()) +
                           w2 * Matrix<Scalar>::Identity(d, d));
}

/// One-dimensional bump and its first two derivatives.
template <typename Scalar>
struct Bump1D {
  Scalar value;
  Scalar d1;
  Scalar d2;
};

template <typename Scalar>
Bump1D<Scalar> bump_1d(Scalar y) {
  const Scalar u = y * y;
  if (!(u < Scalar(1))) return {0, 0, 0};
  const Scalar w = Scalar(1) / (Scalar(1) - u);
  const Scalar b = std::exp(Scalar(1) - w);
  const Scalar w2 = w * w;
  return {b, Scalar(-2) * b * w2 * y, Scalar(-2) * b * ((Scalar(4) * w2 * w - Scalar(2) * w2 * w2) * u + w2)};
}

/// Transition -e^x / (e^x + e^{1-x}), decreasing from 0 to -1.
template <typename Scalar>
Scalar transition(Scalar x) {
  return Scalar(-1) / (Scalar(1) + std::exp(Scalar(1) - Scalar(2) * x));
}

template <typename Scalar>
Scalar transition_d1(Scalar x) {
  const Scalar q = std::exp(Scalar(1) - Scalar(2) * x);
  if (!std::isfinite(q)) return Scalar(0);
  return Scalar(-2) * q / ((Scalar(1) + q) * (Scalar(1) + q));
}

template <typename Scalar>
Scalar transition_d2(Scalar x) {
  const Scalar q = std::exp(Scalar(1) - Scalar(2) * x);
  if (!std::isfinite(q)) return Scalar(0);
  const Scalar p = Scalar(1) + q;
  return Scalar(-4) * q * (q - Scalar(1)) / (p * p * p);
}

enum class Provenance {
  PaperFormula,   // closed form given with the example
  Reconstructed,  // only the limit and the qualitative behavior are given; formula chosen here
  Standard,       // textbook field used as a reference case
};

std::string_view to_string(Provenance p);

/// A family f_n with its limit f on a default domain.
struct GalleryEntry {
  std::string name;
  std::string description;
  int dim;
  Provenance provenance;
  /// Convergence class of f_n -> f ("exact" for n-independent entries).
  std::string convergence;
  /// Documented expected behavior per n and in the limit.
  std::string expected;
  Domain domain;
  std::function<ScalarField(int n)> family;
  std::function<ScalarField()> limit;
  /// Recommended grid cells per axis for detecting the critical points of f_n.
  std::function<int(int n)> grid_hint;
};

const std::vector<GalleryEntry>& gallery_catalogue();

/// Throws ErrorCode::Catalogue listing valid names for unknown entries.
const GalleryEntry& gallery_entry(std::string_view name);

/// n-th member of a gallery family; requires n >= 1.
ScalarField gallery(std::string_view name, int n);

/// The piecewise function g whose rescalings g(x, ny)/n form the single-maximum family.
double single_max_profile(double x, double y);

}  // namespace critsense
