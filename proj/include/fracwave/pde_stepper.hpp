#pragma once

#include <cstddef>
#include <vector>

#include "fracwave/fem1d.hpp"
#include "fracwave/kernels.hpp"
#include "fracwave/ode_stepper.hpp"

namespace fracwave {

/// u0, u1 and the spatial factor g of a separable source g(x) q(t), each a sum of powers of x.
struct PdeProblem {
  std::vector<PowerLoad> u0;
  std::vector<PowerLoad> u1;
  std::vector<PowerLoad> g;
  SourceTerm q = SourceTerm::zero();
};

/// Load vectors (moments against the hat basis) of the same data on a fixed mesh.
struct PdeLoads {
  std::vector<double> u0;
  std::vector<double> u1;
  std::vector<double> g;
  SourceTerm q = SourceTerm::zero();
};

PdeLoads assemble_loads(const PdeProblem& p, const Mesh1D& mesh);

enum class StoreMode { All, FinalOnly };

struct PdeHistory {
  Scheme scheme = Scheme::L1;
  double alpha = 0.0;
  double tau = 0.0;
  std::size_t steps = 0;
  Mesh1D mesh{2};
  double mu_max = 0.0;  // lambda_max(A, M) tau^alpha / 2
  /// U_0..U_n, or only U_n with StoreMode::FinalOnly.
  std::vector<NodalField> states;

  const NodalField& final_state() const { return states.back(); }
};

struct PdeOptions {
  StoreMode store = StoreMode::All;
  /// Replaces the stiffness by zero; used to check that constant histories are preserved.
  bool drop_stiffness = false;
};

/// Runs n steps of the full discretization on `ops`. The kernel table must match alpha.
PdeHistory solve_pde(const PdeProblem& p, Scheme scheme, double alpha, double tau, std::size_t n,
                     const FemOperators& ops, const KernelTable& kt, const PdeOptions& opt = {});

/// As above, with the loads given directly.
PdeHistory solve_pde(const PdeLoads& loads, Scheme scheme, double alpha, double tau, std::size_t n,
                     const FemOperators& ops, const KernelTable& kt, const PdeOptions& opt = {});

/// The same discretization solved mode by mode: generalized eigenpairs of (A, M), one scalar
/// recurrence per eigenvalue, recombined at the end. Dense, so only for N <= 256.
PdeHistory spectral_decompose_solve(const PdeProblem& p, Scheme scheme, double alpha, double tau,
                                    std::size_t n, const FemOperators& ops, const KernelTable& kt);

/// Largest relative residual of the M-weighted recurrence over all stored steps.
double pde_residual(const PdeHistory& h, const PdeProblem& p, const FemOperators& ops, const KernelTable& kt);

struct RatioReport {
  double ratio = 0.0;       // tau^alpha / h^2
  double lambda_max = 0.0;
  double mu_max = 0.0;      // lambda_max tau^alpha / 2
  bool warning = false;     // ratio > 1
};

RatioReport ratio_diagnostic(const Mesh1D& mesh, double alpha, double tau);

/// sqrt(load^T A^{-1} load): the discrete H^{-1} surrogate of the function with moments `load`.
double dual_norm_surrogate(const FemOperators& ops, const std::vector<double>& load);

}  // namespace fracwave
