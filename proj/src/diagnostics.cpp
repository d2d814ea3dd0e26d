#include "fracwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "fracwave/oracle.hpp"

namespace fracwave {

std::vector<TriangleRow> oracle_triangle(const std::vector<ProblemId>& problems, const std::vector<double>& alphas,
                                         double tolerance, int fine_exp) {
  std::vector<TriangleRow> rows;
  const std::size_t n = std::size_t{1} << fine_exp;
  for (ProblemId id : problems) {
    const ScalarProblem p = ode_problem(id);
    for (double a : alphas) {
      TriangleRow r;
      r.problem = problem_letter(id);
      r.alpha = a;
      ExactEval e;
      e.problem = p;
      e.alpha = a;
      r.mittag_leffler = exact_scalar(e, 1.0);
      e.method = ExactMethod::ContourY;
      r.contour = exact_scalar(e, 1.0);
      const KernelTable kt(a, n);
      r.fine = solve_ml1(p, a, 1.0 / static_cast<double>(n), n, kt).final_value();
      r.max_gap = std::max({std::abs(r.mittag_leffler - r.contour), std::abs(r.mittag_leffler - r.fine),
                            std::abs(r.contour - r.fine)});
      r.pass = r.max_gap <= tolerance;
      rows.push_back(r);
    }
  }
  return rows;
}

std::vector<ContourRow> contour_equivalence(const std::vector<double>& alphas, const std::vector<double>& mus,
                                            std::size_t kmax, double tolerance) {
  std::vector<ContourRow> rows;
  const double tau = 1.0 / static_cast<double>(kmax);
  const double y0 = 1.0, y1 = 0.6;
  for (double a : alphas) {
    const KernelTable kt(a, kmax);
    const ContourSpec spec = default_contour(a);
    for (double mu : mus) {
      const double lambda = 2.0 * mu / std::pow(tau, a);
      for (Scheme s : {Scheme::L1, Scheme::ML1}) {
        ContourRow r;
        r.scheme = s;
        r.alpha = a;
        r.mu = mu;
        const auto h = solve_scalar({y0, y1, lambda, SourceTerm::zero()}, s, a, tau, kmax, kt);
        for (std::size_t k = 1; k <= kmax; ++k) {
          r.max_gap = std::max(r.max_gap, std::abs(discrete_contour(s, a, mu, tau, spec, y0, y1, k) - h.values[k]));
        }
        r.pass = r.max_gap <= tolerance;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

std::vector<KernelCertRow> kernel_certify(const std::vector<double>& alphas, const std::vector<double>& mus,
                                          double origin_tolerance) {
  std::vector<KernelCertRow> rows;
  for (double a : alphas) {
    KernelCertRow r;
    r.alpha = a;
    for (double th : {0.0, 1.0, 2.0, 2.5}) {
      r.origin_gap = std::max(r.origin_gap, std::abs(betahat_regular(a, std::polar(1e-9, th))));
    }
    r.min_positivity = 1e300;
    r.min_positivity_ratio = 1e300;
    constexpr int kSamples = 500;
    for (int i = 1; i <= kSamples; ++i) {
      const double y = kPi * i / kSamples;
      const double rb = re_positivity(Scheme::ML1, a, y);
      const double r1 = re_positivity(Scheme::L1, a, y);
      r.min_positivity = std::min({r.min_positivity, rb, r1});
      r.min_positivity_ratio = std::min(r.min_positivity_ratio, rb / r1);
    }
    r.min_margin = 1e300;
    bool certified = true;
    const ContourSpec spec = default_contour(a);
    for (double mu : mus) {
      for (Scheme s : {Scheme::L1, Scheme::ML1}) {
        const MarginReport m = certify_denominator(a, mu, spec, s, 4000);
        r.min_margin = std::min(r.min_margin, m.margin);
        r.enclosed_zeros = std::max(r.enclosed_zeros, m.enclosed_zeros);
        certified = certified && m.certified;
      }
    }
    r.pass = r.origin_gap <= origin_tolerance && r.min_positivity > 0.0 && r.min_positivity_ratio > 0.0 &&
             r.min_margin > 0.0 && certified;
    rows.push_back(r);
  }
  return rows;
}

std::vector<StabilityRow> stability_scalar(const std::vector<double>& alphas, const std::vector<double>& lambdas,
                                           std::size_t steps, double tau, double constant) {
  std::vector<StabilityRow> rows;
  const double y0 = 1.0, y1 = 1.0;
  for (double a : alphas) {
    const KernelTable kt(a, steps);
    for (double lambda : lambdas) {
      for (Scheme s : {Scheme::L1, Scheme::ML1}) {
        StabilityRow r;
        r.scheme = s;
        r.alpha = a;
        r.lambda_or_mu = lambda;
        r.steps = steps;
        const auto h = solve_scalar({y0, y1, lambda, SourceTerm::zero()}, s, a, tau, steps, kt);
        for (std::size_t k = 0; k <= steps; ++k) {
          const double t = tau * static_cast<double>(k);
          const double bound = std::abs(y0) + std::pow(t, 1.0 - 0.5 * a) * std::abs(y1) / std::sqrt(lambda);
          r.worst_ratio = std::max(r.worst_ratio, std::abs(h.values[k]) / bound);
        }
        r.pass = std::isfinite(r.worst_ratio) && r.worst_ratio <= constant;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

std::vector<StabilityRow> stability_pde(const std::vector<double>& alphas, const std::vector<double>& mu_max,
                                        std::size_t cells, std::size_t steps, double constant) {
  std::vector<StabilityRow> rows;
  const FemOperators ops = assemble(Mesh1D(cells));
  PdeProblem p = pde_problem(ProblemId::D);
  p.u1 = pde_problem(ProblemId::E).u1;
  const PdeLoads loads = assemble_loads(p, ops.mesh);
  const double u1_dual = dual_norm_surrogate(ops, loads.u1);
  const double lambda_max = pencil_eigenvalue(cells, cells - 1);
  for (double a : alphas) {
    const KernelTable kt(a, steps);
    for (double mu : mu_max) {
      const double tau = std::pow(2.0 * mu / lambda_max, 1.0 / a);
      for (Scheme s : {Scheme::L1, Scheme::ML1}) {
        StabilityRow r;
        r.pde = true;
        r.scheme = s;
        r.alpha = a;
        r.steps = steps;
        const PdeHistory h = solve_pde(loads, s, a, tau, steps, ops, kt);
        r.lambda_or_mu = h.mu_max;
        const double u0_norm = l2_norm(h.states[0], ops);
        for (std::size_t k = 0; k <= steps; ++k) {
          const double t = tau * static_cast<double>(k);
          const double bound = u0_norm + std::pow(t, 1.0 - 0.5 * a) * u1_dual;
          r.worst_ratio = std::max(r.worst_ratio, l2_norm(h.states[k], ops) / bound);
        }
        r.pass = std::isfinite(r.worst_ratio) && r.worst_ratio <= constant;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

std::vector<DualPathRow> dual_path(const std::vector<ProblemId>& problems, const std::vector<double>& alphas,
                                   const std::vector<int>& h_exps, const std::vector<int>& tau_exps,
                                   double tolerance) {
  std::vector<DualPathRow> rows;
  for (ProblemId id : problems) {
    const PdeProblem p = pde_problem(id);
    for (double a : alphas) {
      for (int he : h_exps) {
        const FemOperators ops = assemble(Mesh1D(std::size_t{1} << he));
        for (int te : tau_exps) {
          const std::size_t n = std::size_t{1} << te;
          const double tau = 1.0 / static_cast<double>(n);
          const KernelTable kt(a, n);
          for (Scheme s : {Scheme::L1, Scheme::ML1}) {
            DualPathRow r;
            r.problem = problem_letter(id);
            r.scheme = s;
            r.alpha = a;
            r.cells = ops.mesh.cells();
            r.steps = n;
            const PdeHistory direct = solve_pde(p, s, a, tau, n, ops, kt);
            const PdeHistory modal = spectral_decompose_solve(p, s, a, tau, n, ops, kt);
            for (std::size_t k = 0; k <= n; ++k) {
              r.max_gap = std::max(r.max_gap, l2_error(direct.states[k], modal.states[k], ops));
            }
            r.pass = r.max_gap <= tolerance;
            rows.push_back(r);
          }
        }
      }
    }
  }
  return rows;
}

}  // namespace fracwave
