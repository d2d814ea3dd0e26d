#pragma once

// Property checks shared by the command-line driver and the acceptance suite.

#include <vector>

#include "fracwave/experiments.hpp"

namespace fracwave {

/// Mittag-Leffler form vs contour form vs fine-grid modified scheme at t = T.
struct TriangleRow {
  char problem = 'a';
  double alpha = 0.0;
  double mittag_leffler = 0.0;
  double contour = 0.0;
  double fine = 0.0;
  double max_gap = 0.0;
  bool pass = false;
};

std::vector<TriangleRow> oracle_triangle(const std::vector<ProblemId>& problems, const std::vector<double>& alphas,
                                         double tolerance = 1e-6, int fine_exp = 14);

/// Discrete contour representation vs the recurrence for k = 1..kmax.
struct ContourRow {
  Scheme scheme = Scheme::L1;
  double alpha = 0.0;
  double mu = 0.0;
  double max_gap = 0.0;
  bool pass = false;
};

std::vector<ContourRow> contour_equivalence(const std::vector<double>& alphas, const std::vector<double>& mus,
                                            std::size_t kmax = 64, double tolerance = 1e-8);

/// Per-alpha kernel certificates: origin behaviour of the modified transform, positivity on the
/// imaginary axis and the denominator margin on the default contour for each mu.
struct KernelCertRow {
  double alpha = 0.0;
  double origin_gap = 0.0;          // max |betahat(z) - z^{alpha-3}| for |z| = 1e-9
  double min_positivity = 0.0;      // min over (0, pi) of both real parts
  double min_positivity_ratio = 0.0;
  double min_margin = 0.0;          // over the mu list, both schemes
  int enclosed_zeros = 0;
  bool pass = false;
};

std::vector<KernelCertRow> kernel_certify(const std::vector<double>& alphas, const std::vector<double>& mus,
                                          double origin_tolerance = 1e-8);

/// Stability proxy without source: max_k ||U_k|| / (||U_0|| + t_k^{1-alpha/2} ||u1||_{-1}).
struct StabilityRow {
  bool pde = false;
  Scheme scheme = Scheme::L1;
  double alpha = 0.0;
  double lambda_or_mu = 0.0;  // lambda for the scalar case, mu_max for the PDE
  std::size_t steps = 0;
  double worst_ratio = 0.0;
  bool pass = false;
};

std::vector<StabilityRow> stability_scalar(const std::vector<double>& alphas, const std::vector<double>& lambdas,
                                           std::size_t steps = 10000, double tau = 0.01, double constant = 5.0);
std::vector<StabilityRow> stability_pde(const std::vector<double>& alphas, const std::vector<double>& mu_max,
                                        std::size_t cells = 64, std::size_t steps = 10000, double constant = 5.0);

/// Direct stepping vs spectral decomposition, max L2 gap over all steps.
struct DualPathRow {
  char problem = 'd';
  Scheme scheme = Scheme::L1;
  double alpha = 0.0;
  std::size_t cells = 0;
  std::size_t steps = 0;
  double max_gap = 0.0;
  bool pass = false;
};

std::vector<DualPathRow> dual_path(const std::vector<ProblemId>& problems, const std::vector<double>& alphas,
                                   const std::vector<int>& h_exps, const std::vector<int>& tau_exps,
                                   double tolerance = 1e-9);

}  // namespace fracwave
