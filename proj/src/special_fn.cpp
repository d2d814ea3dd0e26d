#include "fracwave/special_fn.hpp"

#include <array>
#include <cmath>

#include "fracwave/errors.hpp"
#include "fracwave/quadrature.hpp"

namespace fracwave {

double gamma(double x) {
  if (!(x > 0.0)) throw DomainError("gamma: argument must be positive");
  // glibc tgamma is correctly rounded to within a few ulp on the positive axis.
  return std::tgamma(x);
}

namespace {

// B_2, B_4, ..., B_24
constexpr std::array<double, 12> kBernoulliEven = {
    1.0 / 6.0,         -1.0 / 30.0,          1.0 / 42.0,     -1.0 / 30.0,
    5.0 / 66.0,        -691.0 / 2730.0,      7.0 / 6.0,      -3617.0 / 510.0,
    43867.0 / 798.0,   -174611.0 / 330.0,    854513.0 / 138.0, -236364091.0 / 2730.0};

struct EulerMaclaurin {
  double value;
  double bound;
};

// Partial sum over k < n plus the Euler-Maclaurin correction with `terms` Bernoulli terms.
// The bound is the magnitude of the first omitted correction term, which dominates the remainder
// for real s > 0.
EulerMaclaurin hurwitz_em(double s, double a, int n, int terms) {
  double sum = 0.0;
  for (int k = n - 1; k >= 0; --k) sum += std::pow(k + a, -s);
  const double big = n + a;
  sum += std::pow(big, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(big, -s);

  // coeff_j = s (s+1) ... (s+2j-2) / (2j)!  * big^{-s-2j+1}
  double rising = s;                    // s (s+1) ... (s+2j-2)
  double factorial = 2.0;               // (2j)!
  double power = std::pow(big, -s - 1);  // big^{-s-2j+1}
  double last = 0.0;
  for (int j = 1; j <= terms + 1; ++j) {
    const double term = kBernoulliEven[j - 1] / factorial * rising * power;
    if (j == terms + 1) {
      last = std::abs(term);
      break;
    }
    sum += term;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    factorial *= (2.0 * j + 1) * (2.0 * j + 2);
    power /= big * big;
  }
  return {sum, last};
}

}  // namespace

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0)) throw DomainError("hurwitz_zeta: s must exceed 1");
  if (!(a > 0.0)) throw DomainError("hurwitz_zeta: a must be positive");
  constexpr int kTerms = 10;
  int n = 10;
  for (;;) {
    const EulerMaclaurin em = hurwitz_em(s, a, n, kTerms);
    if (em.bound <= 1e-16 * std::abs(em.value) || n > (1 << 20)) return em.value;
    n *= 2;
  }
}

double zeta(double s) {
  if (!(s > 1.0)) throw DomainError("zeta: s must exceed 1");
  return hurwitz_zeta(s, 1.0);
}

Complex principal_log(Complex z) {
  double arg = std::atan2(z.imag(), z.real());
  if (arg == -kPi) arg = kPi;
  return {std::log(std::abs(z)), arg};
}

Complex cpow(Complex z, double p) {
  if (z == Complex(0.0, 0.0)) {
    if (p > 0.0) return {0.0, 0.0};
    throw DomainError("cpow: zero base requires a positive exponent");
  }
  return std::exp(p * principal_log(z));
}

namespace detail {

double mittag_leffler_series(const MlParams& p, double x) {
  double sum = 0.0;
  double xk = 1.0;
  for (int k = 0;; ++k) {
    const double arg = p.alpha * k + p.beta;
    if (arg > 171.0) break;  // 1/Gamma underflows; |x| <= 1 keeps the tail below 1e-300
    const double term = xk / std::tgamma(arg);
    sum += term;
    if (k > 2 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    xk *= x;
  }
  return sum;
}

double mittag_leffler_contour(const MlParams& p, double x) {
  const double alpha = p.alpha;
  const double beta = p.beta;
  const double rho = std::pow(-x, 1.0 / alpha);

  // Rays sit between the poles s^alpha = x (arg = +-pi/alpha) and the branch cut.
  double phi = 0.75 * kPi;
  double residues = 0.0;
  if (alpha > 1.0) {
    phi = 0.5 * (kPi / alpha + kPi);
    const Complex pole = std::polar(rho, kPi / alpha);
    residues = 2.0 / alpha * std::real(std::exp(pole) * cpow(pole, 1.0 - beta));
  }

  quad::ContourGeometry g;
  g.phi = phi;
  g.radius = 50.0 / std::abs(std::cos(phi));
  g.split = 0.5 * std::min(1.0, rho);  // keep the pole off the origin-rule panels
  g.eps = (alpha - beta > -1.0) ? 0.0 : std::min(0.5, 0.5 * rho);
  g.panels = 32;

  auto integrand = [&](Complex s) {
    return std::exp(s) * cpow(s, alpha - beta) / (cpow(s, alpha) - x);
  };
  const quad::Result r = quad::symmetric_contour(integrand, g, 0.1 * p.tolerance);
  if (r.error > p.tolerance) {
    throw AccuracyError("mittag_leffler: contour quadrature above tolerance", r.error);
  }
  return residues + r.value;
}

}  // namespace detail

double mittag_leffler(const MlParams& p, double x) {
  if (!(p.tolerance > 0.0)) throw DomainError("mittag_leffler: tolerance must be positive");
  if (!(p.alpha > 0.0 && p.alpha <= 2.0)) throw DomainError("mittag_leffler: alpha outside (0, 2]");
  if (!(p.beta > 0.0)) throw DomainError("mittag_leffler: beta must be positive");
  if (!(x <= 0.0)) throw DomainError("mittag_leffler: only the negative real axis is supported");
  if (std::abs(x) <= 1.0) return detail::mittag_leffler_series(p, x);
  return detail::mittag_leffler_contour(p, x);
}

}  // namespace fracwave
