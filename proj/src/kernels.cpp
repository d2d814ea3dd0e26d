#include "fracwave/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracwave/errors.hpp"

namespace fracwave {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("alpha must lie in (1, 2)");
}

constexpr double kTwoPi = 2.0 * kPi;

// Sum over |k| > K of (z + 2 k pi i)^p, expanded in powers of w = z / (2 pi i):
//   (2 pi)^p sum_m C(p, m) w^m [e^{i p pi/2} + (-1)^m e^{-i p pi/2}] zeta(m - p, K + 1).
Complex bilateral_tail(double p, Complex z, int K) {
  const Complex w = z / Complex(0.0, kTwoPi);
  const Complex up = std::polar(1.0, 0.5 * p * kPi);
  const Complex down = std::conj(up);
  const double scale = std::pow(kTwoPi, p);
  Complex sum = 0.0;
  Complex wm = 1.0;
  double binom = 1.0;
  for (int m = 0; m < 200; ++m) {
    const Complex phase = (m % 2 == 0) ? up + down : up - down;
    const Complex term = binom * wm * phase * hurwitz_zeta(m - p, K + 1.0);
    sum += term;
    if (m > 2 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    binom *= (p - m) / (m + 1.0);
    wm *= w;
  }
  return scale * sum;
}

// sum_{0 < |k| <= K} (z + 2k pi i)^p + tail; z itself may be anything with |Im z| < 2 pi.
Complex bilateral_without_center(double p, Complex z) {
  const int K = 8 + static_cast<int>(std::ceil(2.0 * std::abs(z) / kTwoPi));
  Complex sum = 0.0;
  for (int k = K; k >= 1; --k) {
    sum += cpow(z + Complex(0.0, kTwoPi * k), p);
    sum += cpow(z - Complex(0.0, kTwoPi * k), p);
  }
  return sum + bilateral_tail(p, z, K);
}

bool on_cut(Complex z) { return z.imag() == 0.0 && z.real() <= 0.0; }

Complex polylog_series(double alpha, Complex z) {
  const double g = gamma(3.0 - alpha);
  const Complex q = std::exp(-z);
  Complex qk = q;
  Complex sum = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const Complex term = std::pow(static_cast<double>(k), 2.0 - alpha) * qk;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    qk *= q;
  }
  return sum / g;
}

// Folds Im z into (-pi, pi]; only legitimate where the series converges (Re z > 0).
Complex fold_period(Complex z) {
  double y = std::remainder(z.imag(), kTwoPi);
  if (y == -kPi) y = kPi;
  return {z.real(), y};
}

}  // namespace

const char* to_string(Scheme s) { return s == Scheme::L1 ? "L1" : "ML1"; }

double beta1_correction(double alpha) {
  check_alpha(alpha);
  return 2.0 * std::sin(alpha * kPi / 2.0) * std::pow(kTwoPi, alpha - 3.0) * zeta(3.0 - alpha);
}

KernelTable::KernelTable(double alpha, std::size_t levels)
    : alpha_(alpha), levels_(levels), correction_(0.0) {
  check_alpha(alpha);
  if (levels < 1) throw DomainError("kernel table needs at least one level");
  correction_ = fracwave::beta1_correction(alpha);
  const double g = gamma(3.0 - alpha);
  const double p = 2.0 - alpha;
  b_.resize(levels + 2);
  db_.resize(levels + 1);
  for (std::size_t k = 0; k < b_.size(); ++k) b_[k] = std::pow(static_cast<double>(k), p) / g;
  db_[0] = b_[1];
  for (std::size_t j = 1; j < db_.size(); ++j) {
    const double jd = static_cast<double>(j);
    // (j+1)^p - j^p = j^p expm1(p log1p(1/j))
    db_[j] = std::pow(jd, p) * std::expm1(p * std::log1p(1.0 / jd)) / g;
  }
  beta_ = b_;
  beta_[1] += correction_;
  dbeta_ = db_;
  dbeta_[0] += correction_;
  dbeta_[1] -= correction_;
}

KernelTable build_kernels(double alpha, std::size_t levels) { return KernelTable(alpha, levels); }

Complex cexpm1(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

Complex bhat_regular(double alpha, Complex z) {
  check_alpha(alpha);
  if (!(std::abs(z.imag()) < kTwoPi)) throw DomainError("bhat_regular: |Im z| must be below 2 pi");
  return bilateral_without_center(alpha - 3.0, z);
}

Complex bhat(double alpha, Complex z) {
  check_alpha(alpha);
  if (on_cut(z)) throw DomainError("bhat: z lies on the branch cut (-inf, 0]");
  if (z.real() >= 1.0) return polylog_series(alpha, z);
  if (!(std::abs(z.imag()) < kTwoPi)) {
    if (z.real() > 0.0) {
      z = fold_period(z);
    } else {
      throw DomainError("bhat: outside the half plane and the strip |Im z| < 2 pi");
    }
  }
  return cpow(z, alpha - 3.0) + bilateral_without_center(alpha - 3.0, z);
}

Complex betahat(double alpha, Complex z) {
  return bhat(alpha, z) + beta1_correction(alpha) * std::exp(-z);
}

Complex betahat_regular(double alpha, Complex z) {
  return bhat_regular(alpha, z) + beta1_correction(alpha) * std::exp(-z);
}

Complex psi(double alpha, Complex z) {
  const Complex e = cexpm1(z);
  return std::exp(-z) * e * e * e * bhat(alpha, z);
}

Complex Psi(double alpha, Complex z) {
  const Complex e = cexpm1(z);
  return std::exp(-z) * e * e * e * betahat(alpha, z);
}

Complex symbol(Scheme s, double alpha, Complex z) {
  return s == Scheme::L1 ? psi(alpha, z) : Psi(alpha, z);
}

Complex transform(Scheme s, double alpha, Complex z) {
  return s == Scheme::L1 ? bhat(alpha, z) : betahat(alpha, z);
}

double theta_upper(double alpha) { return (alpha + 2.0) * kPi / (4.0 * alpha); }

ContourSpec default_contour(double alpha) {
  check_alpha(alpha);
  ContourSpec spec;
  const double window = theta_upper(alpha) - 0.5 * kPi;
  spec.theta = 0.5 * kPi + std::min(0.3, 0.5 * window);
  return spec;
}

namespace {

Complex denominator(Scheme s, double alpha, double mu, Complex z) {
  return symbol(s, alpha, z) + mu * (1.0 + std::exp(z));
}

// Accumulated change of arg(f) along the polyline through `pts`, refining any step whose
// phase jump exceeds pi/4 so the unwrapping stays unambiguous.
double phase_change(Scheme s, double alpha, double mu, const std::vector<Complex>& pts) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Complex a = pts[i];
    const Complex b = pts[i + 1];
    Complex fa = denominator(s, alpha, mu, a);
    double t = 0.0;
    double step = 1.0;
    while (t < 1.0) {
      const double tn = std::min(1.0, t + step);
      const Complex fn = denominator(s, alpha, mu, a + (b - a) * tn);
      const double d = std::arg(fn / fa);
      if (std::abs(d) > 0.25 * kPi && step > 1e-9) {
        step *= 0.5;
        continue;
      }
      total += d;
      fa = fn;
      t = tn;
      step = std::min(1.0, 2.0 * step);
    }
  }
  return total;
}

}  // namespace

MarginReport certify_denominator(double alpha, double mu, const ContourSpec& spec, Scheme scheme,
                                 std::size_t samples) {
  check_alpha(alpha);
  if (!(mu > 0.0)) throw DomainError("certify_denominator: mu must be positive");
  if (!(spec.theta > 0.5 * kPi && spec.theta < kPi)) {
    throw DomainError("certify_denominator: theta must lie in (pi/2, pi)");
  }
  MarginReport rep;
  rep.alpha = alpha;
  rep.mu = mu;
  rep.theta = spec.theta;
  rep.margin = std::numeric_limits<double>::infinity();

  const double rmax = kPi / std::sin(spec.theta);
  const Complex dir = std::polar(1.0, spec.theta);
  const std::size_t half = std::max<std::size_t>(samples / 2, 2);

  std::vector<double> radii;
  radii.reserve(2 * half);
  for (std::size_t i = 0; i < half; ++i) {  // log-spaced toward the origin
    radii.push_back(rmax * std::pow(1e-8, 1.0 - static_cast<double>(i) / (half - 1)));
  }
  for (std::size_t i = 1; i <= half; ++i) radii.push_back(rmax * static_cast<double>(i) / half);
  std::sort(radii.begin(), radii.end());

  for (double r : radii) {
    const Complex z = r * dir;
    const double m = std::abs(denominator(scheme, alpha, mu, z)) / (mu + std::pow(r, alpha));
    if (m < rep.margin) {
      rep.margin = m;
      rep.argmin_radius = r;
    }
  }
  rep.samples = radii.size();

  // Sector boundary: imaginary axis 0 -> i pi, top edge to the contour end, ray back to 0.
  // Start slightly off the origin where the function tends to 2 mu.
  const double r0 = 1e-8;
  std::vector<Complex> loop;
  loop.emplace_back(0.0, r0);
  for (int i = 1; i <= 256; ++i) loop.emplace_back(0.0, kPi * i / 256.0);
  const Complex end = rmax * dir;
  for (int i = 1; i <= 64; ++i) loop.push_back(Complex(0.0, kPi) + (end - Complex(0.0, kPi)) * (i / 64.0));
  for (int i = 255; i >= 0; --i) {
    const double r = r0 + (rmax - r0) * std::pow(i / 256.0, 2.0);
    loop.push_back(r * dir);
  }
  loop.emplace_back(0.0, r0);
  const double winding = phase_change(scheme, alpha, mu, loop) / (2.0 * kPi);
  rep.enclosed_zeros = static_cast<int>(std::lround(winding));
  rep.certified = rep.margin > 0.0 && std::isfinite(rep.margin) && rep.enclosed_zeros == 0;
  return rep;
}

ContourSpec select_contour(double alpha, double mu, ContourSpec spec, Scheme scheme) {
  for (int attempt = 0; attempt < 30; ++attempt) {
    const MarginReport rep = certify_denominator(alpha, mu, spec, scheme, 2000);
    if (rep.certified) return spec;
    spec.theta = 0.5 * kPi + 0.5 * (spec.theta - 0.5 * kPi);
  }
  throw CertificateError("select_contour: no admissible angle found", 0.0);
}

double cosine_series_A(double alpha, double y) {
  check_alpha(alpha);
  if (!(y > 0.0 && y < kTwoPi)) throw DomainError("cosine_series_A: y must lie in (0, 2 pi)");
  const double p = alpha - 3.0;
  const double s = 3.0 - alpha;
  const double scale = std::pow(kTwoPi, p);
  const double sum = hurwitz_zeta(s, (kTwoPi - y) / kTwoPi) + hurwitz_zeta(s, y / kTwoPi);
  return -std::cos((alpha - 1.0) * kPi / 2.0) * scale * sum;
}

double re_positivity(Scheme s, double alpha, double y) {
  if (!(y != 0.0 && std::abs(y) <= kPi)) throw DomainError("re_positivity: need 0 < |y| <= pi");
  const Complex z(0.0, y);
  const Complex e = cexpm1(z);
  return std::real(std::exp(-z) * e * e * transform(s, alpha, z));
}

}  // namespace fracwave
