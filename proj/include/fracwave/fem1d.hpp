#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracwave {

/// Uniform mesh of (0, 1) with `cells` cells; unknowns live on the interior nodes 1..cells-1.
class Mesh1D {
 public:
  explicit Mesh1D(std::size_t cells);

  std::size_t cells() const noexcept { return cells_; }
  std::size_t interior() const noexcept { return cells_ - 1; }
  double h() const noexcept { return h_; }
  /// Node i = 0..cells.
  double node(std::size_t i) const noexcept { return static_cast<double>(i) / static_cast<double>(cells_); }

 private:
  std::size_t cells_;
  double h_;
};

/// Coefficients in the interior hat basis.
using NodalField = std::vector<double>;

/// Symmetric tridiagonal matrix; off[i] couples rows i and i+1.
struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;
};

/// a * X + b * Y for matrices of equal size.
Tridiag combine(double a, const Tridiag& X, double b, const Tridiag& Y);

/// LDL^T factorization of an SPD tridiagonal matrix (Thomas algorithm in symmetric form).
class TridiagFactor {
 public:
  TridiagFactor() = default;
  explicit TridiagFactor(const Tridiag& B);

  std::size_t size() const noexcept { return d_.size(); }
  void solve_in_place(std::span<double> x) const;
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::vector<double> d_;  // pivots
  std::vector<double> l_;  // unit lower subdiagonal
};

std::vector<double> tridiag_solve(const Tridiag& B, std::span<const double> rhs);

struct FemOperators {
  Mesh1D mesh{2};
  Tridiag mass;       // (h/6) [1 4 1]
  Tridiag stiffness;  // (1/h) [-1 2 -1]
  TridiagFactor mass_factor;
};

FemOperators assemble(const Mesh1D& mesh);

/// c * x^s on (0, 1), s > -1.
struct PowerLoad {
  double coeff = 1.0;
  double exponent = 0.0;
};

/// Exact entries  int_0^1 c x^s phi_i(x) dx.
std::vector<double> load_power(const Mesh1D& mesh, double s, double c = 1.0);

/// Sum of power loads; an empty span gives the zero vector.
std::vector<double> load_vector(const Mesh1D& mesh, std::span<const PowerLoad> terms);

/// Solves M c = load.
NodalField l2_project(const FemOperators& ops, std::span<const double> load);

struct PencilBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Extreme eigenvalues of A c = lambda M c by Sturm-count bisection.
PencilBounds eigen_smallest(const FemOperators& ops);

/// Number of eigenvalues of A c = lambda M c below `lambda` (inertia of A - lambda M).
std::size_t pencil_count_below(const FemOperators& ops, double lambda);

/// Closed-form k-th eigenvalue (k = 1..N) of the uniform P1 pencil.
double pencil_eigenvalue(std::size_t cells, std::size_t k);

/// Interpolates a P1 field from `coarse` onto the nested mesh `fine`.
NodalField prolongate(const Mesh1D& coarse, std::span<const double> field, const Mesh1D& fine);

/// sqrt((a - b)^T M (a - b)).
double l2_error(std::span<const double> a, std::span<const double> b, const FemOperators& ops);

/// sqrt(v^T M v).
double l2_norm(std::span<const double> v, const FemOperators& ops);

}  // namespace fracwave
