#include "fracwave/pde_stepper.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fracwave/errors.hpp"

namespace fracwave {

namespace {

constexpr std::size_t kBlock = 32;

void check_inputs(double alpha, double tau, std::size_t n, const KernelTable& kt) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("time step must be positive");
  if (kt.alpha() != alpha) throw ConfigError("kernel table built for a different alpha");
  if (kt.levels() < n) throw ConfigError("kernel table has too few levels");
}

// y += c * x over n entries.
inline void axpy(double c, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += c * x[i];
}

}  // namespace

PdeLoads assemble_loads(const PdeProblem& p, const Mesh1D& mesh) {
  return {load_vector(mesh, p.u0), load_vector(mesh, p.u1), load_vector(mesh, p.g), p.q};
}

PdeHistory solve_pde(const PdeProblem& p, Scheme scheme, double alpha, double tau, std::size_t n,
                     const FemOperators& ops, const KernelTable& kt, const PdeOptions& opt) {
  return solve_pde(assemble_loads(p, ops.mesh), scheme, alpha, tau, n, ops, kt, opt);
}

PdeHistory solve_pde(const PdeLoads& p, Scheme scheme, double alpha, double tau, std::size_t n,
                     const FemOperators& ops, const KernelTable& kt, const PdeOptions& opt) {
  check_inputs(alpha, tau, n, kt);
  const Mesh1D& mesh = ops.mesh;
  const std::size_t N = mesh.interior();

  PdeHistory h;
  h.scheme = scheme;
  h.alpha = alpha;
  h.tau = tau;
  h.steps = n;
  h.mesh = mesh;
  h.mu_max = ratio_diagnostic(mesh, alpha, tau).mu_max;

  const auto d = kt.differences(scheme);
  const double half_ta = 0.5 * std::pow(tau, alpha);
  const double src_scale = std::pow(tau, alpha - 1.0);
  if (p.u0.size() != N || p.u1.size() != N || p.g.size() != N) throw ConfigError("load length does not match the mesh");
  const std::vector<double>& u1_load = p.u1;
  const std::vector<double>& g_load = p.g;
  const bool has_u1 = std::any_of(u1_load.begin(), u1_load.end(), [](double v) { return v != 0.0; });
  const bool has_src = !p.q.is_zero() && std::any_of(g_load.begin(), g_load.end(), [](double v) { return v != 0.0; });

  Tridiag stiff = ops.stiffness;
  if (opt.drop_stiffness) {
    std::fill(stiff.diag.begin(), stiff.diag.end(), 0.0);
    std::fill(stiff.off.begin(), stiff.off.end(), 0.0);
  }
  const TridiagFactor lhs(combine(d[0], ops.mass, half_ta, stiff));

  // Unknowns are the second differences D_k; V_k = U_{k+1} - U_k and U are accumulated with
  // per-entry compensation (see solve_scalar).
  NodalField U = l2_project(ops, p.u0);
  std::vector<detail::Compensated> u(N), v(N);
  for (std::size_t i = 0; i < N; ++i) u[i].sum = U[i];
  if (opt.store == StoreMode::All) {
    h.states.reserve(n + 1);
    h.states.push_back(U);
  }

  std::vector<double> D(n * N);  // row-major D_0..D_{n-1}
  // far[b] = sum_{j < K} d_{K+b-j} D_j for the current block start K.
  std::vector<double> far(kBlock * N);
  std::vector<double> hist(N), rhs(N), tmp(N), mix(N);

  for (std::size_t K = 0; K < n; K += kBlock) {
    const std::size_t B = std::min(kBlock, n - K);
    std::fill(far.begin(), far.end(), 0.0);
    for (std::size_t j = 0; j < K; ++j) {
      const double* Dj = &D[j * N];
      for (std::size_t b = 0; b < B; ++b) axpy(d[K + b - j], Dj, &far[b * N], N);
    }
    for (std::size_t b = 0; b < B; ++b) {
      const std::size_t k = K + b;
      std::copy_n(&far[b * N], N, hist.begin());
      for (std::size_t j = K; j < k; ++j) axpy(d[k - j], &D[j * N], hist.data(), N);
      ops.mass.apply(hist, rhs);
      for (std::size_t i = 0; i < N; ++i) mix[i] = 2.0 * u[i].value() + v[i].value();
      stiff.apply(mix, tmp);
      const double qk = has_src ? src_scale * p.q.integral(tau * k, tau * (k + 1)) : 0.0;
      const double u1k = has_u1 ? tau * d[k] : 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        rhs[i] = -rhs[i] - half_ta * tmp[i];
        if (has_src) rhs[i] += qk * g_load[i];
        if (has_u1) rhs[i] += u1k * u1_load[i];
      }
      lhs.solve_in_place(rhs);
      double* Dk = &D[k * N];
      for (std::size_t i = 0; i < N; ++i) {
        Dk[i] = rhs[i];
        v[i].add(rhs[i]);
        u[i].add(v[i].value());
        U[i] = u[i].value();
        if (!std::isfinite(U[i])) throw NumericalError("PDE recurrence overflowed at step " + std::to_string(k + 1));
      }
      if (opt.store == StoreMode::All) h.states.push_back(U);
    }
  }
  if (opt.store == StoreMode::FinalOnly) h.states.push_back(U);
  return h;
}

PdeHistory spectral_decompose_solve(const PdeProblem& p, Scheme scheme, double alpha, double tau,
                                    std::size_t n, const FemOperators& ops, const KernelTable& kt) {
  check_inputs(alpha, tau, n, kt);
  const Mesh1D& mesh = ops.mesh;
  const std::size_t N = mesh.interior();
  if (N > 256) throw DomainError("spectral_decompose_solve: at most 256 unknowns");

  const auto Ni = static_cast<Eigen::Index>(N);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(Ni, Ni);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(Ni, Ni);
  for (Eigen::Index i = 0; i < Ni; ++i) {
    A(i, i) = ops.stiffness.diag[i];
    M(i, i) = ops.mass.diag[i];
    if (i + 1 < Ni) {
      A(i, i + 1) = A(i + 1, i) = ops.stiffness.off[i];
      M(i, i + 1) = M(i + 1, i) = ops.mass.off[i];
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
  if (es.info() != Eigen::Success) throw NumericalError("generalized eigensolver failed");
  const Eigen::MatrixXd& phi = es.eigenvectors();  // M-orthonormal columns

  auto to_eigen = [&](const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), Ni); };
  const Eigen::VectorXd y0 = phi.transpose() * to_eigen(load_vector(mesh, p.u0));
  const Eigen::VectorXd y1 = phi.transpose() * to_eigen(load_vector(mesh, p.u1));
  const Eigen::VectorXd gm = phi.transpose() * to_eigen(load_vector(mesh, p.g));

  Eigen::MatrixXd modal(Ni, static_cast<Eigen::Index>(n + 1));
  for (Eigen::Index i = 0; i < Ni; ++i) {
    const ScalarProblem sp{y0(i), y1(i), es.eigenvalues()(i), p.q.scaled(gm(i))};
    const SolutionHistory sh = solve_scalar(sp, scheme, alpha, tau, n, kt);
    for (std::size_t k = 0; k <= n; ++k) modal(i, static_cast<Eigen::Index>(k)) = sh.values[k];
  }
  const Eigen::MatrixXd nodal = phi * modal;

  PdeHistory h;
  h.scheme = scheme;
  h.alpha = alpha;
  h.tau = tau;
  h.steps = n;
  h.mesh = mesh;
  h.mu_max = es.eigenvalues()(Ni - 1) * std::pow(tau, alpha) / 2.0;
  h.states.resize(n + 1, NodalField(N));
  for (std::size_t k = 0; k <= n; ++k) {
    for (std::size_t i = 0; i < N; ++i) h.states[k][i] = nodal(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }
  return h;
}

double pde_residual(const PdeHistory& h, const PdeProblem& p, const FemOperators& ops, const KernelTable& kt) {
  if (h.states.size() != h.steps + 1) throw DomainError("pde_residual needs the full history");
  const std::size_t N = ops.mesh.interior();
  const auto seq = h.scheme == Scheme::L1 ? kt.b() : kt.beta();
  auto diff = [&](std::size_t j) { return seq[j + 1] - seq[j]; };
  const double half_ta = 0.5 * std::pow(h.tau, h.alpha);
  const auto u1_load = load_vector(ops.mesh, p.u1);
  const auto g_load = load_vector(ops.mesh, p.g);
  const auto& U = h.states;

  double worst = 0.0;
  std::vector<double> comb(N), lhs(N), rhs(N), sum(N);
  for (std::size_t k = 0; k < h.steps; ++k) {
    for (std::size_t i = 0; i < N; ++i) comb[i] = (U[1][i] - U[0][i]) * diff(k);
    for (std::size_t j = 1; j <= k; ++j) {
      const double c = diff(k - j);
      for (std::size_t i = 0; i < N; ++i) comb[i] += c * (U[j + 1][i] - 2.0 * U[j][i] + U[j - 1][i]);
    }
    ops.mass.apply(comb, lhs);
    for (std::size_t i = 0; i < N; ++i) sum[i] = U[k][i] + U[k + 1][i];
    const auto Asum = ops.stiffness.apply(sum);
    const double qk = p.q.is_zero() ? 0.0 : std::pow(h.tau, h.alpha - 1.0) * p.q.integral(h.tau * k, h.tau * (k + 1));
    double scale = 0.0, res = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      rhs[i] = qk * g_load[i] + h.tau * diff(k) * u1_load[i];
      const double l = lhs[i] + half_ta * Asum[i];
      res = std::max(res, std::abs(l - rhs[i]));
      scale = std::max({scale, std::abs(lhs[i]), std::abs(half_ta * Asum[i]), std::abs(rhs[i])});
    }
    worst = std::max(worst, res / std::max(scale, 1e-300));
  }
  return worst;
}

RatioReport ratio_diagnostic(const Mesh1D& mesh, double alpha, double tau) {
  RatioReport r;
  const double ta = std::pow(tau, alpha);
  r.ratio = ta / (mesh.h() * mesh.h());
  r.lambda_max = pencil_eigenvalue(mesh.cells(), mesh.interior());
  r.mu_max = r.lambda_max * ta / 2.0;
  r.warning = r.ratio > 1.0;
  return r;
}

double dual_norm_surrogate(const FemOperators& ops, const std::vector<double>& load) {
  const auto x = tridiag_solve(ops.stiffness, load);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * load[i];
  return std::sqrt(std::max(0.0, s));
}

}  // namespace fracwave
