#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracwave/special_fn.hpp"

namespace fracwave {

/// Which coefficient sequence drives the time stepping: the classical L1 weights b_k,
/// or the modified weights beta_k (identical except for a corrected beta_1).
enum class Scheme { L1, ML1 };

const char* to_string(Scheme s);

/// Precomputed weights for one alpha and up to `levels` time levels.
///
/// b[k] = k^{2-alpha} / Gamma(3-alpha) for k = 0..levels+1, beta[k] == b[k] except beta[1],
/// and db[j] = b[j+1] - b[j] (likewise dbeta) for j = 0..levels. The differences are evaluated
/// without cancellation so they stay accurate for large j.
class KernelTable {
 public:
  KernelTable(double alpha, std::size_t levels);

  double alpha() const noexcept { return alpha_; }
  std::size_t levels() const noexcept { return levels_; }

  std::span<const double> b() const noexcept { return b_; }
  std::span<const double> beta() const noexcept { return beta_; }
  std::span<const double> db() const noexcept { return db_; }
  std::span<const double> dbeta() const noexcept { return dbeta_; }

  /// First differences of the sequence used by `s`.
  std::span<const double> differences(Scheme s) const noexcept {
    return s == Scheme::L1 ? db() : dbeta();
  }

  /// beta_1 - b_1 = 2 sin(alpha pi / 2) (2 pi)^{alpha-3} zeta(3 - alpha).
  double beta1_correction() const noexcept { return correction_; }

 private:
  double alpha_;
  std::size_t levels_;
  double correction_;
  std::vector<double> b_, beta_, db_, dbeta_;
};

KernelTable build_kernels(double alpha, std::size_t levels);

/// beta_1 - b_1 for a given alpha, via the zeta closed form.
double beta1_correction(double alpha);

/// Discrete Laplace transform sum_k b_k e^{-kz}. Valid for Re z > 0 and, by continuation,
/// on the strip |Im z| < 2 pi minus the cut (-inf, 0].
Complex bhat(double alpha, Complex z);

/// bhat(z) - z^{alpha-3}; analytic on |Im z| < 2 pi, so z == 0 is allowed.
Complex bhat_regular(double alpha, Complex z);

/// bhat(z) + (beta_1 - b_1) e^{-z}.
Complex betahat(double alpha, Complex z);

/// betahat(z) - z^{alpha-3}; vanishes at z = 0.
Complex betahat_regular(double alpha, Complex z);

/// psi(z) = e^{-z} (e^z - 1)^3 bhat(z).
Complex psi(double alpha, Complex z);

/// Psi(z) = e^{-z} (e^z - 1)^3 betahat(z).
Complex Psi(double alpha, Complex z);

/// symbol(s, z): psi for L1, Psi for ML1. Likewise transform(s, z) is bhat / betahat.
Complex symbol(Scheme s, double alpha, Complex z);
Complex transform(Scheme s, double alpha, Complex z);

/// e^z - 1 without cancellation near 0.
Complex cexpm1(Complex z);

/// Angled contour made of rays r e^{+-i theta}.
struct ContourSpec {
  double theta = 0.5 * kPi + 0.3;
  double radius = 0.0;   // truncation radius for the infinite contour; 0 selects automatically
  int panels = 16;       // initial composite-rule panel count
  double grading = 2.0;  // breakpoint grading exponent toward the origin side
};

/// Upper bound (alpha + 2) pi / (4 alpha) of the admissible angle window.
double theta_upper(double alpha);

/// Default angle pi/2 + 0.3, pulled back to the middle of (pi/2, theta_upper) when that window is
/// narrower than 0.3.
ContourSpec default_contour(double alpha);

struct MarginReport {
  double alpha = 0.0;
  double mu = 0.0;
  double theta = 0.0;
  double margin = 0.0;        // min |psi + mu (1 + e^z)| / (mu + |z|^alpha) over samples of the ray
  double argmin_radius = 0.0;
  std::size_t samples = 0;
  int enclosed_zeros = 0;     // winding number of psi + mu (1 + e^z) around the sector boundary
  bool certified = false;
};

/// Samples the truncated contour (|Im z| <= pi) and the sector between it and the imaginary axis.
/// The contour is certified when the margin is positive and no zero lies in the sector.
MarginReport certify_denominator(double alpha, double mu, const ContourSpec& spec,
                                 Scheme scheme = Scheme::L1, std::size_t samples = 10000);

/// Starts from `spec` and halves theta - pi/2 until certification succeeds.
/// Throws CertificateError after 30 halvings.
ContourSpec select_contour(double alpha, double mu, ContourSpec spec = {},
                           Scheme scheme = Scheme::L1);

/// The cosine series A(y) appearing in the imaginary-axis factorisation of psi.
double cosine_series_A(double alpha, double y);

/// Re(e^{-iy} (e^{iy} - 1)^2 that(iy)) for that = bhat (L1) or betahat (ML1), 0 < |y| <= pi.
double re_positivity(Scheme s, double alpha, double y);

}  // namespace fracwave
