#pragma once

#include "critsense/linalg.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

namespace critsense {

enum class Smoothness { C0, C1, C2 };

std::string_view to_string(Smoothness s);

// Central-difference steps. First derivatives balance O(h^2) truncation against
// rounding at h ~ eps^(1/3); second differences of values need h ~ eps^(1/4).
template <typename Scalar>
Scalar default_gradient_step(const Vector<Scalar>& s) {
  return Scalar(1e-5) * (Scalar(1) + s.norm());
}

template <typename Scalar>
Scalar default_second_difference_step(const Vector<Scalar>& s) {
  return Scalar(1e-4) * (Scalar(1) + s.norm());
}

template <typename Scalar, typename ValueFn>
Vector<Scalar> central_gradient(const ValueFn& value, const Vector<Scalar>& s, Scalar h) {
  Vector<Scalar> g(s.size());
  Vector<Scalar> probe = s;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    probe[i] = s[i] + h;
    const Scalar up = value(probe);
    probe[i] = s[i] - h;
    const Scalar down = value(probe);
    probe[i] = s[i];
    g[i] = (up - down) / (Scalar(2) * h);
  }
  return g;
}

/// Hessian as the symmetrized central-difference Jacobian of a gradient.
template <typename Scalar, typename GradientFn>
Matrix<Scalar> central_jacobian_symmetric(const GradientFn& gradient, const Vector<Scalar>& s, Scalar h) {
  const auto d = s.size();
  Matrix<Scalar> jac(d, d);
  Vector<Scalar> probe = s;
  for (Eigen::Index j = 0; j < d; ++j) {
    probe[j] = s[j] + h;
    const Vector<Scalar> up = gradient(probe);
    probe[j] = s[j] - h;
    const Vector<Scalar> down = gradient(probe);
    probe[j] = s[j];
    jac.col(j) = (up - down) / (Scalar(2) * h);
  }
  return (jac + jac.transpose()) / Scalar(2);
}

/// Hessian from values only: second differences on the diagonal, four-point mixed partials.
template <typename Scalar, typename ValueFn>
Matrix<Scalar> central_hessian(const ValueFn& value, const Vector<Scalar>& s, Scalar h) {
  const auto d = s.size();
  Matrix<Scalar> hess(d, d);
  const Scalar center = value(s);
  Vector<Scalar> probe = s;
  for (Eigen::Index i = 0; i < d; ++i) {
    probe[i] = s[i] + h;
    const Scalar up = value(probe);
    probe[i] = s[i] - h;
    const Scalar down = value(probe);
    probe[i] = s[i];
    hess(i, i) = (up - Scalar(2) * center + down) / (h * h);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      auto eval = [&](Scalar si, Scalar sj) {
        probe[i] = s[i] + si;
        probe[j] = s[j] + sj;
        const Scalar v = value(probe);
        probe[i] = s[i];
        probe[j] = s[j];
        return v;
      };
      const Scalar mixed = (eval(h, h) - eval(h, -h) - eval(-h, h) + eval(-h, -h)) / (Scalar(4) * h * h);
      hess(i, j) = mixed;
      hess(j, i) = mixed;
    }
  }
  return hess;
}

/// A scalar field f : R^D -> R with optional analytic derivatives.
///
/// Missing derivatives fall back to central differences: the gradient from values,
/// the Hessian from the (analytic or differenced) gradient when an analytic gradient
/// exists and from second differences of values otherwise. All evaluation paths are
/// pure, so a field may be shared across threads.
template <typename Scalar>
class BasicScalarField {
 public:
  using VectorType = Vector<Scalar>;
  using MatrixType = Matrix<Scalar>;
  using ValueFn = std::function<Scalar(const VectorType&)>;
  using GradientFn = std::function<VectorType(const VectorType&)>;
  using HessianFn = std::function<MatrixType(const VectorType&)>;

  BasicScalarField(int dim, ValueFn value, std::string label, Smoothness smoothness = Smoothness::C2)
      : dim_(dim), value_(std::move(value)), label_(std::move(label)), smoothness_(smoothness) {}

  BasicScalarField& with_gradient(GradientFn gradient) & {
    gradient_ = std::move(gradient);
    return *this;
  }
  BasicScalarField&& with_gradient(GradientFn gradient) && { return std::move(with_gradient(std::move(gradient))); }

  BasicScalarField& with_hessian(HessianFn hessian) & {
    hessian_ = std::move(hessian);
    return *this;
  }
  BasicScalarField&& with_hessian(HessianFn hessian) && { return std::move(with_hessian(std::move(hessian))); }

  int dim() const noexcept { return dim_; }
  Smoothness smoothness() const noexcept { return smoothness_; }
  const std::string& label() const noexcept { return label_; }
  bool has_analytic_gradient() const noexcept { return static_cast<bool>(gradient_); }
  bool has_analytic_hessian() const noexcept { return static_cast<bool>(hessian_); }

  Scalar value(const VectorType& s) const { return value_(s); }
  Scalar operator()(const VectorType& s) const { return value_(s); }

  VectorType gradient(const VectorType& s) const {
    if (gradient_) return gradient_(s);
    return central_gradient<Scalar>(value_, s, default_gradient_step(s));
  }

  MatrixType hessian(const VectorType& s) const {
    if (hessian_) return hessian_(s);
    if (gradient_) return central_jacobian_symmetric<Scalar>(gradient_, s, default_gradient_step(s));
    return central_hessian<Scalar>(value_, s, default_second_difference_step(s));
  }

  /// Magnitude below which a gradient norm is indistinguishable from zero.
  Scalar gradient_noise_floor() const noexcept { return gradient_ ? Scalar(1e-13) : Scalar(1e-9); }

  BasicScalarField relabeled(std::string label) const {
    BasicScalarField copy = *this;
    copy.label_ = std::move(label);
    return copy;
  }

  const ValueFn& value_fn() const noexcept { return value_; }
  const GradientFn& gradient_fn() const noexcept { return gradient_; }
  const HessianFn& hessian_fn() const noexcept { return hessian_; }

 private:
  int dim_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  std::string label_;
  Smoothness smoothness_;
};

using ScalarField = BasicScalarField<double>;

namespace detail {
inline Smoothness weaker(Smoothness a, Smoothness b) { return static_cast<int>(a) < static_cast<int>(b) ? a : b; }
}  // namespace detail

/// Pointwise sum; analytic derivatives survive only when both operands provide them.
template <typename Scalar>
BasicScalarField<Scalar> operator+(const BasicScalarField<Scalar>& f, const BasicScalarField<Scalar>& g) {
  using Field = BasicScalarField<Scalar>;
  auto fv = f.value_fn();
  auto gv = g.value_fn();
  Field sum(f.dim(), [fv, gv](const typename Field::VectorType& s) { return fv(s) + gv(s); },
            f.label() + " + " + g.label(), detail::weaker(f.smoothness(), g.smoothness()));
  if (f.has_analytic_gradient() && g.has_analytic_gradient()) {
    auto fg = f.gradient_fn();
    auto gg = g.gradient_fn();
    sum.with_gradient([fg, gg](const typename Field::VectorType& s) -> typename Field::VectorType {
      return fg(s) + gg(s);
    });
  }
  if (f.has_analytic_hessian() && g.has_analytic_hessian()) {
    auto fh = f.hessian_fn();
    auto gh = g.hessian_fn();
    sum.with_hessian([fh, gh](const typename Field::VectorType& s) -> typename Field::MatrixType {
      return fh(s) + gh(s);
    });
  }
  return sum;
}

template <typename Scalar>
BasicScalarField<Scalar> operator*(Scalar c, const BasicScalarField<Scalar>& f) {
  using Field = BasicScalarField<Scalar>;
  auto fv = f.value_fn();
  Field out(f.dim(), [fv, c](const typename Field::VectorType& s) { return c * fv(s); }, f.label(),
            f.smoothness());
  if (f.has_analytic_gradient()) {
    auto fg = f.gradient_fn();
    out.with_gradient([fg, c](const typename Field::VectorType& s) -> typename Field::VectorType { return c * fg(s); });
  }
  if (f.has_analytic_hessian()) {
    auto fh = f.hessian_fn();
    out.with_hessian([fh, c](const typename Field::VectorType& s) -> typename Field::MatrixType { return c * fh(s); });
  }
  return out;
}

template <typename Scalar>
BasicScalarField<Scalar> operator-(const BasicScalarField<Scalar>& f) {
  return Scalar(-1) * f;
}

/// g(s) = f(s - shift): moves every feature of f by `shift`.
template <typename Scalar>
BasicScalarField<Scalar> translated(const BasicScalarField<Scalar>& f, const Vector<Scalar>& shift) {
  using Field = BasicScalarField<Scalar>;
  auto fv = f.value_fn();
  Field out(f.dim(), [fv, shift](const typename Field::VectorType& s) { return fv(s - shift); }, f.label(),
            f.smoothness());
  if (f.has_analytic_gradient()) {
    auto fg = f.gradient_fn();
    out.with_gradient(
        [fg, shift](const typename Field::VectorType& s) -> typename Field::VectorType { return fg(s - shift); });
  }
  if (f.has_analytic_hessian()) {
    auto fh = f.hessian_fn();
    out.with_hessian(
        [fh, shift](const typename Field::VectorType& s) -> typename Field::MatrixType { return fh(s - shift); });
  }
  return out;
}

/// Field with analytic derivatives stripped, forcing the finite-difference paths.
template <typename Scalar>
BasicScalarField<Scalar> without_derivatives(const BasicScalarField<Scalar>& f) {
  return BasicScalarField<Scalar>(f.dim(), f.value_fn(), f.label(), f.smoothness());
}

/// f(x) = 1/2 x'Ax + b'x + c with exact derivatives.
template <typename Scalar>
BasicScalarField<Scalar> quadratic_field(const Matrix<Scalar>& a, const Vector<Scalar>& b, Scalar c,
                                         std::string label = "quadratic") {
  using Field = BasicScalarField<Scalar>;
  const Matrix<Scalar> sym = (a + a.transpose()) / Scalar(2);
  return Field(static_cast<int>(sym.rows()),
               [sym, b, c](const typename Field::VectorType& s) {
                 return Scalar(0.5) * s.dot(sym * s) + b.dot(s) + c;
               },
               std::move(label))
      .with_gradient([sym, b](const typename Field::VectorType& s) -> typename Field::VectorType {
        return sym * s + b;
      })
      .with_hessian([sym](const typename Field::VectorType&) -> typename Field::MatrixType { return sym; });
}

}  // namespace critsense
