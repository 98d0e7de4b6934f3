#include "critsense/gallery.hpp"

#include "critsense/error.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace critsense {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::PaperFormula: return "PaperFormula";
    case Provenance::Reconstructed: return "Reconstructed";
    case Provenance::Standard: return "Standard";
  }
  return "?";
}

namespace {

using ValueFn = ScalarField::ValueFn;
using GradientFn = ScalarField::GradientFn;
using HessianFn = ScalarField::HessianFn;

ScalarField make_field(int dim, std::string label, Smoothness smoothness, ValueFn value, GradientFn gradient,
                       HessianFn hessian = {}) {
  ScalarField f(dim, std::move(value), std::move(label), smoothness);
  f.with_gradient(std::move(gradient));
  if (hessian) f.with_hessian(std::move(hessian));
  return f;
}

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

std::string member_label(std::string_view name, int n) {
  std::ostringstream out;
  out << name << "[n=" << n << "]";
  return out.str();
}

// ---- one-dimensional helpers ---------------------------------------------------------

struct Scalar1D {
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

ScalarField from_1d(std::string label, Smoothness smoothness, Scalar1D fn) {
  auto f = fn.f;
  auto d1 = fn.d1;
  auto d2 = fn.d2;
  return make_field(
      1, std::move(label), smoothness, [f](const Vec& s) { return f(s[0]); },
      [d1](const Vec& s) -> Vec { return Vec::Constant(1, d1(s[0])); },
      [d2](const Vec& s) -> Mat { return Mat::Constant(1, 1, d2(s[0])); });
}

// ---- single maximum profile g -------------------------------------------------------

struct ProfileDerivatives {
  double value;
  double gx, gy;
  double gxx, gxy, gyy;
};

ProfileDerivatives profile(double x, double y) {
  const double e = std::exp(-x * x);
  const double e1 = -2 * x * e;
  const double e2 = (4 * x * x - 2) * e;
  const double s = transition(x);
  const double s1 = transition_d1(x);
  const double s2 = transition_d2(x);
  if (y <= -1) return {y, 0, 1, 0, 0, 0};
  if (y <= 0) {
    const auto b = bump_1d(y);
    return {(1 - b.value) * y + b.value * e,
            b.value * e1,
            -b.d1 * y + (1 - b.value) + b.d1 * e,
            b.value * e2,
            b.d1 * e1,
            -b.d2 * y - 2 * b.d1 + b.d2 * e};
  }
  if (y <= 1) {
    const auto b = bump_1d(y);
    return {(1 - b.value) * s + b.value * e,
            (1 - b.value) * s1 + b.value * e1,
            b.d1 * (e - s),
            (1 - b.value) * s2 + b.value * e2,
            b.d1 * (e1 - s1),
            b.d2 * (e - s)};
  }
  if (y <= 2) {
    const double u = y - 1;
    const auto b = bump_1d(u);
    return {b.value * s + (1 - b.value) * u,
            b.value * s1,
            b.d1 * (s - u) + (1 - b.value),
            b.value * s2,
            b.d1 * s1,
            b.d2 * (s - u) - 2 * b.d1};
  }
  return {y - 1, 0, 1, 0, 0, 0};
}

ScalarField single_max_member(int n) {
  const double nn = n;
  return make_field(
      2, member_label("singlemax", n), Smoothness::C1,
      [nn](const Vec& s) { return profile(s[0], nn * s[1]).value / nn; },
      [nn](const Vec& s) -> Vec {
        const auto g = profile(s[0], nn * s[1]);
        return Vec{{g.gx / nn, g.gy}};
      },
      [nn](const Vec& s) -> Mat {
        const auto g = profile(s[0], nn * s[1]);
        Mat h(2, 2);
        h << g.gxx / nn, g.gxy, g.gxy, nn * g.gyy;
        return h;
      });
}

ScalarField linear_y() {
  return make_field(
      2, "y", Smoothness::C2, [](const Vec& s) { return s[1]; }, [](const Vec&) -> Vec { return Vec{{0.0, 1.0}}; },
      [](const Vec&) -> Mat { return Mat::Zero(2, 2); });
}

// ---- bump-perturbed parabola and saddle ---------------------------------------------

ScalarField fig13a_member(int n) {
  const double nn = n;
  const double root = std::sqrt(nn);
  return from_1d(member_label("fig13a", n), Smoothness::C2,
                 {[=](double x) { return x * x + bump_1d(nn * x + 1).value / root - 5 / nn; },
                  [=](double x) { return 2 * x + nn * bump_1d(nn * x + 1).d1 / root; },
                  [=](double x) { return 2 + nn * nn * bump_1d(nn * x + 1).d2 / root; }});
}

ScalarField parabola() {
  return from_1d("x^2", Smoothness::C2, {[](double x) { return x * x; }, [](double x) { return 2 * x; },
                                         [](double) { return 2.0; }});
}

ScalarField fig13b_member(int n) {
  const double nn = n;
  auto arg = [nn](const Vec& s) { return Vec{{nn * s[0] + 1, nn * s[1] + 1}}; };
  return make_field(
      2, member_label("fig13b", n), Smoothness::C2,
      [=](const Vec& s) { return s[0] * s[0] - s[1] * s[1] + 20 * bump(arg(s)) / (nn * nn); },
      [=](const Vec& s) -> Vec { return Vec{{2 * s[0], -2 * s[1]}} + 20 * bump_gradient<double>(arg(s)) / nn; },
      [=](const Vec& s) -> Mat { return diag2(2, -2) + 20 * bump_hessian<double>(arg(s)); });
}

ScalarField saddle2() {
  return make_field(
      2, "x^2 - y^2", Smoothness::C2, [](const Vec& s) { return s[0] * s[0] - s[1] * s[1]; },
      [](const Vec& s) -> Vec { return Vec{{2 * s[0], -2 * s[1]}}; }, [](const Vec&) -> Mat { return diag2(2, -2); });
}

// ---- twisted saddle ------------------------------------------------------------------

// Angle capped at pi/2, not pi: rotating x^2 - y^2 by pi/2 already negates it.
struct TwistAngle {
  double n;
  double angle(double r) const {
    if (n == 0 || !(r * n > 1)) return n == 0 ? std::numbers::pi / 2 : 0.0;
    return 0.5 * std::numbers::pi * std::exp(-1 / (n * r - 1));
  }
  double slope(double r) const {
    if (n == 0 || !(r * n > 1)) return 0.0;
    const double t = n * r - 1;
    return 0.5 * std::numbers::pi * std::exp(-1 / t) * n / (t * t);
  }
};

ScalarField twisted_member(int n, std::string label) {
  const TwistAngle twist{static_cast<double>(n)};
  auto value = [twist](const Vec& s) {
    const double th = twist.angle(s.norm());
    const double c = std::cos(th), sn = std::sin(th);
    const double u = c * s[0] - sn * s[1];
    const double v = sn * s[0] + c * s[1];
    return u * u - v * v;
  };
  auto gradient = [twist](const Vec& s) -> Vec {
    const double r = s.norm();
    const double th = twist.angle(r);
    const double c = std::cos(th), sn = std::sin(th);
    const double u = c * s[0] - sn * s[1];
    const double v = sn * s[0] + c * s[1];
    const Vec dq{{2 * u, -2 * v}};
    // d(Rot s)/d(theta) = Rot(theta + pi/2) s
    const Vec drot{{-sn * s[0] - c * s[1], c * s[0] - sn * s[1]}};
    Mat rot(2, 2);
    rot << c, -sn, sn, c;
    Vec g = rot.transpose() * dq;
    if (r > 0) g += dq.dot(drot) * twist.slope(r) * s / r;
    return g;
  };
  return make_field(2, std::move(label), Smoothness::C2, value, gradient);
}

ScalarField twisted_limit() {
  return make_field(
      2, "y^2 - x^2", Smoothness::C2, [](const Vec& s) { return s[1] * s[1] - s[0] * s[0]; },
      [](const Vec& s) -> Vec { return Vec{{-2 * s[0], 2 * s[1]}}; }, [](const Vec&) -> Mat { return diag2(-2, 2); });
}

// ---- flat maximum -exp(-1/x^2) -------------------------------------------------------

double flat_value(double x) { return x == 0 ? 0.0 : -std::exp(-1 / (x * x)); }
double flat_d1(double x) {
  if (x == 0) return 0.0;
  const double e = std::exp(-1 / (x * x));
  return e == 0 ? 0.0 : -2 * e / (x * x * x);
}
double flat_d2(double x) {
  if (x == 0) return 0.0;
  const double e = std::exp(-1 / (x * x));
  if (e == 0) return 0.0;
  const double x2 = x * x;
  return -e * (4 / (x2 * x2 * x2) - 6 / (x2 * x2));
}

ScalarField flatmax_member(int n) {
  const double nn = n;
  return from_1d(member_label("flatmax", n), Smoothness::C2,
                 {[=](double x) { return flat_value(x) + x * x / (2 * nn); },
                  [=](double x) { return flat_d1(x) + x / nn; }, [=](double x) { return flat_d2(x) + 1 / nn; }});
}

ScalarField flatmax_limit() {
  return from_1d("-exp(-1/x^2)", Smoothness::C2, {flat_value, flat_d1, flat_d2});
}

// ---- Peano surface ----------------------------------------------------------------------

ScalarField peano(double morse_shift = 0.0, std::string label = "peano") {
  const double a = morse_shift;
  return make_field(
      2, std::move(label), Smoothness::C2,
      [a](const Vec& s) {
        const double x = s[0], y = s[1];
        return (2 * x * x - y) * (y - x * x) + a * x * x;
      },
      [a](const Vec& s) -> Vec {
        const double x = s[0], y = s[1];
        return Vec{{6 * x * y - 8 * x * x * x + 2 * a * x, 3 * x * x - 2 * y}};
      },
      [a](const Vec& s) -> Mat {
        const double x = s[0], y = s[1];
        Mat h(2, 2);
        h << 6 * y - 24 * x * x + 2 * a, 6 * x, 6 * x, -2;
        return h;
      });
}

// ---- merging maxima on 1 - x^2 -------------------------------------------------------

ScalarField fig10_member(int n) {
  const double nn = n;
  return from_1d(member_label("fig10", n), Smoothness::C2,
                 {[=](double x) { return 1 - x * x + 4 * bump_1d(nn * x - 2).value / (nn * nn); },
                  [=](double x) { return -2 * x + 4 * bump_1d(nn * x - 2).d1 / nn; },
                  [=](double x) { return -2 + 4 * bump_1d(nn * x - 2).d2; }});
}

ScalarField cap_parabola() {
  return from_1d("1 - x^2", Smoothness::C2, {[](double x) { return 1 - x * x; }, [](double x) { return -2 * x; },
                                             [](double) { return -2.0; }});
}

// ---- simple C0/C1 counterexamples ------------------------------------------------------

ScalarField fig4a_member(int n) {
  const double w = 1.0 / n;
  return from_1d(member_label("fig4a", n), Smoothness::C1,
                 {[=](double x) {
                    const double t = std::max(std::abs(x) - w, 0.0);
                    return t * t;
                  },
                  [=](double x) {
                    const double t = std::max(std::abs(x) - w, 0.0);
                    return x < 0 ? -2 * t : 2 * t;
                  },
                  [=](double x) { return std::abs(x) > w ? 2.0 : 0.0; }});
}

ScalarField fig4b_member(int n) {
  const double nn = n;
  const double k = nn * nn;
  return from_1d(member_label("fig4b", n), Smoothness::C2,
                 {[=](double x) { return x + std::sin(k * x) / nn; }, [=](double x) { return 1 + nn * std::cos(k * x); },
                  [=](double x) { return -nn * k * std::sin(k * x); }});
}

ScalarField identity_1d() {
  return from_1d("x", Smoothness::C2, {[](double x) { return x; }, [](double) { return 1.0; },
                                       [](double) { return 0.0; }});
}

ScalarField fig4c_member(int n) {
  const double eps = 1.0 / (static_cast<double>(n) * n);
  return from_1d(member_label("fig4c", n), Smoothness::C2,
                 {[=](double x) { return x * x * x - eps * x; }, [=](double x) { return 3 * x * x - eps; },
                  [](double x) { return 6 * x; }});
}

ScalarField cubic_1d() {
  return from_1d("x^3", Smoothness::C2, {[](double x) { return x * x * x; }, [](double x) { return 3 * x * x; },
                                         [](double x) { return 6 * x; }});
}

// ---- standard reference fields ---------------------------------------------------------

ScalarField bowl(int dim, double sign, std::string label) {
  return make_field(
      dim, std::move(label), Smoothness::C2, [sign](const Vec& s) { return sign * s.squaredNorm(); },
      [sign](const Vec& s) -> Vec { return 2 * sign * s; },
      [sign, dim](const Vec&) -> Mat { return 2 * sign * Mat::Identity(dim, dim); });
}

ScalarField monkey() {
  return make_field(
      2, "x^3 - 3xy^2", Smoothness::C2,
      [](const Vec& s) { return s[0] * s[0] * s[0] - 3 * s[0] * s[1] * s[1]; },
      [](const Vec& s) -> Vec { return Vec{{3 * s[0] * s[0] - 3 * s[1] * s[1], -6 * s[0] * s[1]}}; },
      [](const Vec& s) -> Mat {
        Mat h(2, 2);
        h << 6 * s[0], -6 * s[1], -6 * s[1], -6 * s[0];
        return h;
      });
}

ScalarField undulation() {
  return make_field(
      2, "x^3 + y^2", Smoothness::C2, [](const Vec& s) { return s[0] * s[0] * s[0] + s[1] * s[1]; },
      [](const Vec& s) -> Vec { return Vec{{3 * s[0] * s[0], 2 * s[1]}}; },
      [](const Vec& s) -> Mat { return diag2(6 * s[0], 2); });
}

ScalarField linear_x() {
  return make_field(
      2, "x", Smoothness::C2, [](const Vec& s) { return s[0]; }, [](const Vec&) -> Vec { return Vec{{1.0, 0.0}}; },
      [](const Vec&) -> Mat { return Mat::Zero(2, 2); });
}

ScalarField double_well() {
  return make_field(
      2, "x^4/4 - x^2/2 + y^2/2", Smoothness::C2,
      [](const Vec& s) {
        const double x2 = s[0] * s[0];
        return x2 * x2 / 4 - x2 / 2 + s[1] * s[1] / 2;
      },
      [](const Vec& s) -> Vec { return Vec{{s[0] * s[0] * s[0] - s[0], s[1]}}; },
      [](const Vec& s) -> Mat { return diag2(3 * s[0] * s[0] - 1, 1); });
}

ScalarField wave_perturbation() {
  return make_field(
      2, "sin(x + 2y) + cos(3x - y)/2", Smoothness::C2,
      [](const Vec& s) { return std::sin(s[0] + 2 * s[1]) + 0.5 * std::cos(3 * s[0] - s[1]); },
      [](const Vec& s) -> Vec {
        const double c = std::cos(s[0] + 2 * s[1]);
        const double d = std::sin(3 * s[0] - s[1]);
        return Vec{{c - 1.5 * d, 2 * c + 0.5 * d}};
      },
      [](const Vec& s) -> Mat {
        const double a = std::sin(s[0] + 2 * s[1]);
        const double b = std::cos(3 * s[0] - s[1]);
        Mat h(2, 2);
        h << -a - 4.5 * b, -2 * a + 1.5 * b, -2 * a + 1.5 * b, -4 * a - 0.5 * b;
        return h;
      });
}

/// Sum of isotropic Gaussians plus a linear tilt.
ScalarField gaussians(std::vector<Vec> centers, double width, Vec tilt, std::string label) {
  auto value = [centers, width, tilt](const Vec& s) {
    double v = tilt.dot(s);
    for (const Vec& c : centers) v += std::exp(-(s - c).squaredNorm() / width);
    return v;
  };
  auto gradient = [centers, width, tilt](const Vec& s) -> Vec {
    Vec g = tilt;
    for (const Vec& c : centers) g += std::exp(-(s - c).squaredNorm() / width) * (-2 / width) * (s - c);
    return g;
  };
  auto hessian = [centers, width](const Vec& s) -> Mat {
    const auto d = s.size();
    Mat h = Mat::Zero(d, d);
    for (const Vec& c : centers) {
      const Vec r = s - c;
      const double e = std::exp(-r.squaredNorm() / width);
      h += e * ((4 / (width * width)) * (r * r.transpose()) - (2 / width) * Mat::Identity(d, d));
    }
    return h;
  };
  return make_field(static_cast<int>(tilt.size()), std::move(label), Smoothness::C2, value, gradient, hessian);
}

ScalarField cubic_saddle(double cubic) {
  return make_field(
      2, "(x^2 - y^2)/2 + c x^3", Smoothness::C2,
      [cubic](const Vec& s) { return 0.5 * (s[0] * s[0] - s[1] * s[1]) + cubic * s[0] * s[0] * s[0]; },
      [cubic](const Vec& s) -> Vec { return Vec{{s[0] + 3 * cubic * s[0] * s[0], -s[1]}}; },
      [cubic](const Vec& s) -> Mat { return diag2(1 + 6 * cubic * s[0], -1); });
}

ScalarField quad_cubic_member(int n) {
  const double c = 1.0 / n;
  return make_field(
      2, member_label("quadcubic", n), Smoothness::C2,
      [c](const Vec& s) {
        const double x = s[0], y = s[1];
        return 0.5 * (x * x + 2 * y * y) + c * (x * x * x + x * y * y);
      },
      [c](const Vec& s) -> Vec {
        const double x = s[0], y = s[1];
        return Vec{{x + c * (3 * x * x + y * y), 2 * y + c * 2 * x * y}};
      },
      [c](const Vec& s) -> Mat {
        const double x = s[0], y = s[1];
        Mat h(2, 2);
        h << 1 + 6 * c * x, 2 * c * y, 2 * c * y, 2 + 2 * c * x;
        return h;
      });
}

ScalarField quad_cubic_limit() {
  Mat a = diag2(1, 2);
  return quadratic_field<double>(a, Vec::Zero(2), 0.0, "(x^2 + 2y^2)/2");
}

int fixed_grid(int) { return 64; }

GalleryEntry constant_entry(std::string name, std::string description, Provenance provenance, std::string expected,
                            Domain domain, ScalarField field, int grid = 64) {
  const int dim = field.dim();
  return GalleryEntry{std::move(name),
                      std::move(description),
                      dim,
                      provenance,
                      "exact",
                      std::move(expected),
                      std::move(domain),
                      [field](int) { return field; },
                      [field] { return field; },
                      [grid](int) { return grid; }};
}

std::vector<GalleryEntry> build_catalogue() {
  std::vector<GalleryEntry> entries;
  const Vec origin2 = Vec::Zero(2);
  const Domain unit_disk = Domain::ball(origin2, 1.0);
  const Domain square1 = Domain::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));

  entries.push_back({"singlemax", "f_n(x,y) = g(x, n y)/n with the five-branch profile g; limit f = y", 2,
                     Provenance::PaperFormula, "C0",
                     "each f_n: one maximum at the origin and no other critical point; f = y: none",
                     square1, single_max_member, linear_y, [](int n) { return 8 * n + 64; }});
  entries.push_back({"fig13a", "f_n(x) = x^2 + b(nx+1)/sqrt(n) - 5/n; limit x^2", 1, Provenance::PaperFormula, "C0",
                     "each f_n: min/max/min triple near the origin; f: one minimum", Domain::interval(-1, 1),
                     fig13a_member, parabola, [](int n) { return 64 * n + 256; }});
  entries.push_back({"fig13b", "f_n(x,y) = x^2 - y^2 + 20 b(nx+1, ny+1)/n^2; limit x^2 - y^2", 2,
                     Provenance::PaperFormula, "C1",
                     "each f_n: saddle at the origin, a maximum inside the bump support and a second saddle beside "
                     "it (three points, index sum -1); f: one saddle",
                     Domain::box(Vec::Constant(2, -2.0), Vec::Constant(2, 2.0)), fig13b_member, saddle2,
                     [](int n) { return 16 * n + 64; }});
  entries.push_back({"twisted", "f_n(s) = q(Rot(R_n(|s|)/2) s), q = x^2 - y^2, R_n(x) = pi exp(-1/(nx-1)) for x > 1/n",
                     2, Provenance::Reconstructed, "C1",
                     "each f_n: a single saddle at the origin with Hessian diag(2,-2); f = y^2 - x^2 has Hessian "
                     "diag(-2,2)",
                     unit_disk, [](int n) { return twisted_member(n, member_label("twisted", n)); }, twisted_limit,
                     [](int n) { return 8 * n + 32; }});
  entries.push_back({"flatmax", "f_n(x) = -exp(-1/x^2) + x^2/(2n); limit -exp(-1/x^2)", 1, Provenance::Reconstructed,
                     "C2", "each f_n: Morse minimum at 0 flanked by two maxima; f: one degenerate maximum at 0",
                     Domain::interval(-1, 1), flatmax_member, flatmax_limit, [](int) { return 1024; }});
  entries.push_back(constant_entry("peano", "Peano surface (2x^2 - y)(y - x^2)", Provenance::Reconstructed,
                                   "single degenerate saddle at the origin: det H = 0, homological index -1",
                                   unit_disk, peano()));
  entries.push_back({"peano_morse", "f_n = (2x^2 - y)(y - x^2) + x^2/n; limit Peano surface", 2,
                     Provenance::Reconstructed, "C2",
                     "each f_n: one Morse saddle (H = diag(2/n, -2)) at the origin; f: degenerate saddle",
                     unit_disk, [](int n) { return peano(1.0 / n, member_label("peano_morse", n)); },
                     [] { return peano(); }, fixed_grid});
  entries.push_back({"fig10", "f_n(x) = 1 - x^2 + (4/n^2) b(nx - 2); limit 1 - x^2", 1, Provenance::Reconstructed,
                     "C1", "each f_n: two maxima and one minimum, separation ~1/n; f: one maximum",
                     Domain::interval(-1, 1), fig10_member, cap_parabola, [](int n) { return 64 * n + 256; }});
  entries.push_back({"fig4a", "f_n(x) = max(|x| - 1/n, 0)^2; limit x^2", 1, Provenance::Reconstructed, "C0",
                     "each f_n: plateau of non-isolated minima on [-1/n, 1/n]; f: one minimum",
                     Domain::interval(-2, 2), fig4a_member, parabola, [](int n) { return 64 * n + 256; }});
  entries.push_back({"fig4b", "f_n(x) = x + sin(n^2 x)/n; limit x", 1, Provenance::Reconstructed, "C0",
                     "N_C(f_n) grows like n^2 (no critical point for n = 1); f: none", Domain::interval(-2, 2),
                     fig4b_member, identity_1d, [](int n) { return std::min(16 * n * n + 256, 1 << 21); }});
  entries.push_back({"fig4c", "f_n(x) = x^3 - x/n^2; limit x^3", 1, Provenance::Reconstructed, "C1",
                     "each f_n: maximum and minimum at -+1/(sqrt(3) n); f: one undulation point",
                     Domain::interval(-1, 1), fig4c_member, cubic_1d, [](int n) { return 64 * n + 256; }});
  entries.push_back({"doublewell", "f_n = x^4/4 - x^2/2 + y^2/2 + n^-2 (sin(x + 2y) + cos(3x - y)/2)", 2,
                     Provenance::Standard, "C2",
                     "f: minima at (+-1, 0), saddle at the origin; f_n matches for moderate n",
                     Domain::ball(origin2, 1.6),
                     [](int n) {
                       const double c = 1.0 / (static_cast<double>(n) * n);
                       return (double_well() + c * wave_perturbation()).relabeled(member_label("doublewell", n));
                     },
                     double_well, fixed_grid});
  entries.push_back({"quadcubic", "f_n = (x^2 + 2y^2)/2 + (x^3 + xy^2)/n; limit (x^2 + 2y^2)/2", 2,
                     Provenance::Standard, "C2", "minimum at the origin for every n; used for Morse-chart flows",
                     Domain::ball(origin2, 0.2), quad_cubic_member, quad_cubic_limit, fixed_grid});

  entries.push_back(constant_entry("bowl", "x^2 + y^2", Provenance::Standard, "minimum at the origin", unit_disk,
                                   bowl(2, 1, "x^2 + y^2")));
  entries.push_back(constant_entry("peak", "-(x^2 + y^2)", Provenance::Standard, "maximum at the origin", unit_disk,
                                   bowl(2, -1, "-(x^2 + y^2)")));
  entries.push_back(constant_entry("saddle", "x^2 - y^2", Provenance::Standard,
                                   "hyperbolic saddle at the origin, index -1", unit_disk, saddle2()));
  entries.push_back(constant_entry("monkey", "x^3 - 3xy^2", Provenance::Standard,
                                   "monkey saddle at the origin, index -2, three prongs", unit_disk, monkey()));
  entries.push_back(constant_entry("undulation", "x^3 + y^2", Provenance::Standard,
                                   "undulation point at the origin, index 0", unit_disk, undulation()));
  entries.push_back(constant_entry("linear", "x", Provenance::Standard, "no critical points", unit_disk, linear_x()));
  entries.push_back(constant_entry("bowl3", "x^2 + y^2 + z^2", Provenance::Standard, "minimum at the origin",
                                   Domain::ball(Vec::Zero(3), 1.0), bowl(3, 1, "x^2 + y^2 + z^2"), 16));
  entries.push_back(constant_entry("peak3", "-(x^2 + y^2 + z^2)", Provenance::Standard, "maximum at the origin",
                                   Domain::ball(Vec::Zero(3), 1.0), bowl(3, -1, "-(x^2 + y^2 + z^2)"), 16));
  entries.push_back(constant_entry(
      "twogauss", "exp(-((x-0.4)^2+y^2)/0.05) + exp(-((x+0.4)^2+y^2)/0.05)", Provenance::Standard,
      "maxima near (+-0.4, 0), mountain-pass saddle at the origin", unit_disk,
      gaussians({Vec{{0.4, 0.0}}, Vec{{-0.4, 0.0}}}, 0.05, Vec::Zero(2), "two gaussians")));
  entries.push_back(constant_entry(
      "tiltgauss", "exp(-((x-0.4)^2+(y-0.7)^2)/0.05) + exp(-((x+0.4)^2+(y-0.7)^2)/0.05) + y/2", Provenance::Standard,
      "maxima near (+-0.4, 0.71); the pass between them lies on the boundary at (0, 1)", unit_disk,
      gaussians({Vec{{0.4, 0.7}}, Vec{{-0.4, 0.7}}}, 0.05, Vec{{0.0, 0.5}}, "tilted gaussians")));
  entries.push_back(constant_entry("cubic1d", "x^2/2 + 0.05 x^3", Provenance::Standard,
                                   "Morse minimum at 0, maximum at -20/3 (outside the default domain)",
                                   Domain::interval(-0.5, 0.5),
                                   from_1d("x^2/2 + 0.05x^3", Smoothness::C2,
                                           {[](double x) { return 0.5 * x * x + 0.05 * x * x * x; },
                                            [](double x) { return x + 0.15 * x * x; },
                                            [](double x) { return 1 + 0.3 * x; }})));
  entries.push_back(constant_entry("cubic2d", "(x^2 - y^2)/2 + 0.05 x^3", Provenance::Standard,
                                   "Morse saddle at the origin", unit_disk, cubic_saddle(0.05)));
  return entries;
}

}  // namespace

double single_max_profile(double x, double y) { return profile(x, y).value; }

const std::vector<GalleryEntry>& gallery_catalogue() {
  static const std::vector<GalleryEntry> entries = build_catalogue();
  return entries;
}

const GalleryEntry& gallery_entry(std::string_view name) {
  const auto& entries = gallery_catalogue();
  const auto it = std::find_if(entries.begin(), entries.end(), [&](const GalleryEntry& e) { return e.name == name; });
  if (it != entries.end()) return *it;
  std::string valid;
  for (const auto& e : entries) {
    if (!valid.empty()) valid += ", ";
    valid += e.name;
  }
  throw Error(ErrorCode::Catalogue, "unknown gallery entry '" + std::string(name) + "'; valid names: " + valid);
}

ScalarField gallery(std::string_view name, int n) {
  if (n < 1) throw Error(ErrorCode::Usage, "gallery index n must be >= 1");
  return gallery_entry(name).family(n);
}

}  // namespace critsense
