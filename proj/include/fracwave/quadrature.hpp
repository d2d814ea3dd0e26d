#pragma once

// Composite Gauss-Legendre rules and the conjugate-symmetric contour integral used by the
// Mittag-Leffler evaluator and the oracle module.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "fracwave/errors.hpp"
#include "fracwave/special_fn.hpp"

namespace fracwave::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

using GaussRule = boost::math::quadrature::gauss<double, 20>;

/// 20-point Gauss-Legendre on [a, b].
template <class F>
double gauss_panel(F&& f, double a, double b) {
  const auto& x = GaussRule::abscissa();
  const auto& w = GaussRule::weights();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  // Boost stores the non-negative half of a symmetric rule; the 0 node only exists for odd orders.
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      sum += w[i] * f(mid);
    } else {
      sum += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
    }
  }
  return half * sum;
}

/// Composite rule on breakpoints a + (b-a) (i/panels)^grading, i.e. graded toward a.
template <class F>
double graded_panels(F&& f, double a, double b, int panels, double grading) {
  double sum = 0.0;
  double left = a;
  for (int i = 1; i <= panels; ++i) {
    const double right =
        (i == panels) ? b : a + (b - a) * std::pow(static_cast<double>(i) / panels, grading);
    sum += gauss_panel(f, left, right);
    left = right;
  }
  return sum;
}

/// Doubles the panel count until two successive composite results agree to `tol`.
template <class F>
Result adaptive_graded(F&& f, double a, double b, double tol, int panels = 8,
                       double grading = 1.0, int max_panels = 1 << 16) {
  double prev = graded_panels(f, a, b, panels, grading);
  while (panels < max_panels) {
    panels *= 2;
    const double next = graded_panels(f, a, b, panels, grading);
    const double err = std::abs(next - prev);
    if (err <= tol * std::max(1.0, std::abs(next))) return {next, err};
    prev = next;
  }
  throw AccuracyError("composite Gauss rule did not converge", std::abs(prev));
}

/// Recursive bisection of one Gauss panel until the halves agree with the whole to `tol`.
template <class F>
double gauss_bisect(F&& f, double a, double b, double whole, double tol, int depth = 0) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_panel(f, a, mid);
  const double right = gauss_panel(f, mid, b);
  if (std::abs(left + right - whole) <= tol || depth >= 30) return left + right;
  return gauss_bisect(f, a, mid, left, 0.5 * tol, depth + 1) +
         gauss_bisect(f, mid, b, right, 0.5 * tol, depth + 1);
}

/// Integral of f over [0, b] where f may carry an integrable algebraic singularity at 0.
/// Uses r = b e^{-s} and unit panels in s (each refined by bisection) until the geometric tail
/// estimate drops below tol.
template <class F>
Result origin_singular(F&& f, double b, double tol) {
  auto g = [&](double s) {
    const double r = b * std::exp(-s);
    return f(r) * r;
  };
  double total = 0.0;
  double prev_piece = 0.0;
  constexpr double kMaxS = 680.0;  // b e^{-s} stays a normal double
  for (double s = 0.0; s < kMaxS; s += 1.0) {
    const double piece = gauss_bisect(g, s, s + 1.0, gauss_panel(g, s, s + 1.0), 0.1 * tol);
    total += piece;
    if (s >= 4.0 && prev_piece != 0.0) {
      const double q = std::abs(piece / prev_piece);
      if (q < 1.0) {
        const double tail = std::abs(piece) * q / (1.0 - q);
        if (tail <= tol) return {total, tail};
      }
    }
    if (piece == 0.0 && s >= 4.0) return {total, 0.0};
    prev_piece = piece;
  }
  throw AccuracyError("origin-singular integral did not decay", std::abs(prev_piece));
}

/// Geometry of a conjugate-symmetric Hankel-type contour: rays r e^{+-i phi} for r in [eps, radius],
/// closed near the origin by the arc eps e^{i t}, |t| <= phi, which passes to the right of 0.
/// With eps == 0 the rays meet at the origin.
struct ContourGeometry {
  double phi = 0.0;
  double eps = 0.0;
  double radius = 1.0;
  double split = 1.0;    // rays use the origin-singular rule on [0, split] when eps == 0
  int panels = 16;       // initial panel count on [split, radius]
  double grading = 1.0;  // breakpoint grading exponent on [split, radius]
};

/// (1 / 2 pi i) times the contour integral of F, oriented so Im z increases along the contour.
/// F must satisfy F(conj z) == conj F(z); only the upper half is evaluated.
template <class F>
Result symmetric_contour(F&& func, const ContourGeometry& g, double tol) {
  const Complex dir = std::polar(1.0, g.phi);
  auto ray = [&](double r) { return std::imag(func(r * dir) * dir); };
  Result total;
  double start = g.eps;
  if (g.eps == 0.0) {
    const double split = std::min(g.split, g.radius);
    const Result near = origin_singular(ray, split, tol * 1e-2);
    total.value += near.value;
    total.error += near.error;
    start = split;
  } else {
    auto arc = [&](double t) {
      const Complex z = std::polar(g.eps, t);
      return std::imag(func(z) * Complex(0.0, 1.0) * z);
    };
    const Result a = adaptive_graded(arc, 0.0, g.phi, tol, 4);
    total.value += a.value;
    total.error += a.error;
  }
  if (start < g.radius) {
    const Result far = adaptive_graded(ray, start, g.radius, tol, g.panels, g.grading);
    total.value += far.value;
    total.error += far.error;
  }
  total.value /= kPi;
  total.error /= kPi;
  return total;
}

}  // namespace fracwave::quad
