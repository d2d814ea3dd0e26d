#pragma once

#include <complex>

namespace fracwave {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Gamma function for x > 0. Throws DomainError otherwise.
double gamma(double x);

/// Hurwitz zeta  sum_{k>=0} (k + a)^{-s}  for s > 1, a > 0 (Euler-Maclaurin with explicit remainder bound).
double hurwitz_zeta(double s, double a);

/// Riemann zeta for s > 1.
double zeta(double s);

/// Principal logarithm with arg in (-pi, pi]; a negative real axis point is always given arg +pi,
/// regardless of the sign of its zero imaginary part.
Complex principal_log(Complex z);

/// z^p on the principal branch. z == 0 is allowed only for p > 0 (returns 0).
Complex cpow(Complex z, double p);

/// Order/type/tolerance for the two-parameter Mittag-Leffler function on the negative axis.
struct MlParams {
  double alpha = 1.5;
  double beta = 1.0;
  double tolerance = 1e-12;
};

/// E_{alpha,beta}(x) for x <= 0, alpha in (0, 2]. Taylor series for |x| <= 1, contour integral above.
double mittag_leffler(const MlParams& p, double x);

namespace detail {
// Both branches are exposed so tests can check their agreement around the switch radius.
double mittag_leffler_series(const MlParams& p, double x);
double mittag_leffler_contour(const MlParams& p, double x);
}  // namespace detail

}  // namespace fracwave
