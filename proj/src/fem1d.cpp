#include "fracwave/fem1d.hpp"

#include <algorithm>
#include <cmath>

#include "fracwave/errors.hpp"
#include "fracwave/special_fn.hpp"

namespace fracwave {

Mesh1D::Mesh1D(std::size_t cells) : cells_(cells), h_(0.0) {
  if (cells < 2) throw DomainError("mesh needs at least two cells (one interior node)");
  h_ = 1.0 / static_cast<double>(cells);
}

void Tridiag::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n) throw DomainError("tridiagonal apply: size mismatch");
  if (n == 1) {
    y[0] = diag[0] * x[0];
    return;
  }
  y[0] = diag[0] * x[0] + off[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    y[i] = off[i - 1] * x[i - 1] + diag[i] * x[i] + off[i] * x[i + 1];
  }
  y[n - 1] = off[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
}

std::vector<double> Tridiag::apply(std::span<const double> x) const {
  std::vector<double> y(size());
  apply(x, y);
  return y;
}

Tridiag combine(double a, const Tridiag& X, double b, const Tridiag& Y) {
  if (X.size() != Y.size()) throw DomainError("combine: size mismatch");
  Tridiag out;
  out.diag.resize(X.size());
  out.off.resize(X.off.size());
  for (std::size_t i = 0; i < X.diag.size(); ++i) out.diag[i] = a * X.diag[i] + b * Y.diag[i];
  for (std::size_t i = 0; i < X.off.size(); ++i) out.off[i] = a * X.off[i] + b * Y.off[i];
  return out;
}

TridiagFactor::TridiagFactor(const Tridiag& B) {
  const std::size_t n = B.size();
  if (n == 0 || B.off.size() + 1 != n) throw DomainError("tridiagonal factor: malformed matrix");
  d_.resize(n);
  l_.resize(n - 1);
  d_[0] = B.diag[0];
  for (std::size_t i = 1; i <= n; ++i) {
    if (!(d_[i - 1] > 0.0)) {
      throw NumericalError("tridiagonal factor: nonpositive pivot at row " + std::to_string(i - 1));
    }
    if (i == n) break;
    l_[i - 1] = B.off[i - 1] / d_[i - 1];
    d_[i] = B.diag[i] - l_[i - 1] * B.off[i - 1];
  }
}

void TridiagFactor::solve_in_place(std::span<double> x) const {
  const std::size_t n = d_.size();
  if (x.size() != n) throw DomainError("tridiagonal solve: size mismatch");
  for (std::size_t i = 1; i < n; ++i) x[i] -= l_[i - 1] * x[i - 1];
  x[n - 1] /= d_[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = x[i] / d_[i] - l_[i] * x[i + 1];
}

std::vector<double> TridiagFactor::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

std::vector<double> tridiag_solve(const Tridiag& B, std::span<const double> rhs) {
  return TridiagFactor(B).solve(rhs);
}

FemOperators assemble(const Mesh1D& mesh) {
  const std::size_t n = mesh.interior();
  const double h = mesh.h();
  FemOperators ops;
  ops.mesh = mesh;
  ops.mass.diag.assign(n, 4.0 * h / 6.0);
  ops.mass.off.assign(n - 1, h / 6.0);
  ops.stiffness.diag.assign(n, 2.0 / h);
  ops.stiffness.off.assign(n - 1, -1.0 / h);
  ops.mass_factor = TridiagFactor(ops.mass);
  return ops;
}

std::vector<double> load_power(const Mesh1D& mesh, double s, double c) {
  if (!(s > -1.0)) throw DomainError("load_power: exponent must exceed -1");
  // entry_i = (G(x_{i+1}) - 2 G(x_i) + G(x_{i-1})) / h with G = x^q / ((s+1)(s+2)), q = s + 2.
  // The second difference is G(x_i)/h * [(1+u)^q - 2 + (1-u)^q], u = 1/i, summed as a series in u^2.
  const double q = s + 2.0;
  const double h = mesh.h();
  const double scale = c / ((s + 1.0) * (s + 2.0) * h);
  std::vector<double> out(mesh.interior());
  for (std::size_t i = 1; i <= out.size(); ++i) {
    double bracket;
    if (i == 1) {
      bracket = std::pow(2.0, q) - 2.0;
    } else {
      const double u2 = 1.0 / (static_cast<double>(i) * static_cast<double>(i));
      double binom = 1.0;  // C(q, 2m)
      double pw = 1.0;
      double sum = 0.0;
      for (int m = 1; m < 400; ++m) {
        binom *= (q - (2 * m - 2)) * (q - (2 * m - 1)) / ((2.0 * m - 1) * (2.0 * m));
        pw *= u2;
        const double term = binom * pw;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
      }
      bracket = 2.0 * sum;
    }
    out[i - 1] = scale * std::pow(mesh.node(i), q) * bracket;
  }
  return out;
}

std::vector<double> load_vector(const Mesh1D& mesh, std::span<const PowerLoad> terms) {
  std::vector<double> out(mesh.interior(), 0.0);
  for (const auto& t : terms) {
    const auto v = load_power(mesh, t.exponent, t.coeff);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  }
  return out;
}

NodalField l2_project(const FemOperators& ops, std::span<const double> load) {
  if (load.size() != ops.mesh.interior()) throw DomainError("l2_project: load length mismatch");
  return ops.mass_factor.solve(load);
}

std::size_t pencil_count_below(const FemOperators& ops, double lambda) {
  const auto& A = ops.stiffness;
  const auto& M = ops.mass;
  const std::size_t n = A.size();
  std::size_t count = 0;
  double d = A.diag[0] - lambda * M.diag[0];
  for (std::size_t i = 0;; ++i) {
    if (d < 0.0) ++count;
    if (i + 1 == n) break;
    if (d == 0.0) d = 1e-300;  // perturbed pivot, standard in Sturm counts
    const double e = A.off[i] - lambda * M.off[i];
    d = (A.diag[i + 1] - lambda * M.diag[i + 1]) - e * e / d;
  }
  return count;
}

PencilBounds eigen_smallest(const FemOperators& ops) {
  const std::size_t n = ops.mesh.interior();
  const double h = ops.mesh.h();
  double hi_bound = 12.0 / (h * h) * (1.0 + 1e-12) + 1.0;
  if (pencil_count_below(ops, hi_bound) != n) {
    throw NumericalError("eigen_smallest: spectrum not bracketed by 12/h^2");
  }
  auto bisect = [&](std::size_t target) {  // smallest lambda with count_below(lambda) >= target
    double lo = 0.0, hi = hi_bound;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (pencil_count_below(ops, mid) >= target) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  return {bisect(1), bisect(n)};
}

double pencil_eigenvalue(std::size_t cells, std::size_t k) {
  if (k < 1 || k >= cells) throw DomainError("pencil_eigenvalue: k must lie in 1..cells-1");
  const double h = 1.0 / static_cast<double>(cells);
  const double c = std::cos(kPi * static_cast<double>(k) * h);
  return 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
}

NodalField prolongate(const Mesh1D& coarse, std::span<const double> field, const Mesh1D& fine) {
  if (field.size() != coarse.interior()) throw DomainError("prolongate: field length mismatch");
  if (fine.cells() % coarse.cells() != 0) throw ConfigError("prolongate: meshes are not nested");
  const std::size_t r = fine.cells() / coarse.cells();
  auto value = [&](std::size_t node) {  // coarse nodal value with zero boundary values
    return (node == 0 || node == coarse.cells()) ? 0.0 : field[node - 1];
  };
  NodalField out(fine.interior());
  for (std::size_t j = 1; j <= out.size(); ++j) {
    const std::size_t cell = j / r;
    const std::size_t rem = j % r;
    const double w = static_cast<double>(rem) / static_cast<double>(r);
    out[j - 1] = rem == 0 ? value(cell) : (1.0 - w) * value(cell) + w * value(cell + 1);
  }
  return out;
}

double l2_error(std::span<const double> a, std::span<const double> b, const FemOperators& ops) {
  if (a.size() != b.size() || a.size() != ops.mesh.interior()) {
    throw DomainError("l2_error: length mismatch");
  }
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return l2_norm(diff, ops);
}

double l2_norm(std::span<const double> v, const FemOperators& ops) {
  const auto Mv = ops.mass.apply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * Mv[i];
  return std::sqrt(std::max(0.0, s));
}

}  // namespace fracwave
