#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracwave/kernels.hpp"
#include "fracwave/ode_stepper.hpp"

namespace fracwave {

enum class ExactMethod { MittagLeffler, ContourY };

struct ExactEval {
  ScalarProblem problem;
  double alpha = 1.5;
  ExactMethod method = ExactMethod::MittagLeffler;
  double tolerance = 1e-11;
};

/// Exact solution y(t) of the scalar problem, t > 0.
///
/// MittagLeffler: E_{a,1}(-l t^a) y0 + t E_{a,2}(-l t^a) y1 plus, for each power source c s^g,
/// c Gamma(g+1) t^{a+g} E_{a,a+g+1}(-l t^a). Tabulated sources are convolved with
/// s^{a-1} E_{a,a}(-l s^a) by quadrature.
/// ContourY: inverse Laplace transform on the rays w = r e^{+-i theta} (w = t s), with a small
/// arc around the origin when a term is not integrable there. Tabulated sources are rejected.
double exact_scalar(const ExactEval& e, double t);

/// Homogeneous part of the discrete solution Y_k from its contour representation on the
/// truncated contour |Im z| <= pi. Certifies the denominator first and throws CertificateError
/// when the certificate fails.
double discrete_contour(Scheme scheme, double alpha, double mu, double tau, const ContourSpec& spec,
                        double y0, double y1, std::size_t k, double tolerance = 1e-12);

/// E_j = (1/2 pi i) int e^{jz} / (symbol(z) + mu (e^z + 1)) dz over the same contour, j >= 1.
double discrete_resolvent(Scheme scheme, double alpha, double mu, const ContourSpec& spec,
                          std::size_t j, double tolerance = 1e-12);

/// tau^{alpha-1} sum_{j<k} E_{k-j} int_{t_j}^{t_{j+1}} f, given E_1..E_k (resolvent[i] = E_{i+1}).
double discrete_source_part(std::span<const double> resolvent, const SourceTerm& f, double alpha,
                            double tau, std::size_t k);

/// Fine-grid reference: the modified scheme (or `scheme`) at step tau_ref up to time T.
struct FineReference {
  SolutionHistory history;

  /// Value at t = k * tau for a study step tau; tau / tau_ref must be an integer.
  double at(double tau, std::size_t k) const;
  /// Trajectory sampled on the grid of step tau, n = T / tau values after Y_0.
  std::vector<double> sampled(double tau) const;
};

/// Runs the reference solve. Every entry of `study_steps` must be an integer multiple (>= 8) of
/// tau_ref and T / tau_ref must be an integer, otherwise ConfigError.
FineReference fine_grid_reference(Scheme scheme, const ScalarProblem& p, double alpha, double tau_ref,
                                  double T, std::span<const double> study_steps);

/// Integer ratio a / b, or ConfigError if a / b is not an integer to 1e-9.
std::size_t nesting_ratio(double a, double b);

}  // namespace fracwave
