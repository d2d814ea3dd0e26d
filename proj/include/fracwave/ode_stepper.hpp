#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracwave/kernels.hpp"

namespace fracwave {

/// c * t^gamma with gamma > -1.
struct PowerTerm {
  double coeff = 0.0;
  double exponent = 0.0;
};

/// Time-dependent source f(t) built from a small closed-form catalog.
///
/// Power terms (and hence constants and sums of them) have exact interval integrals.
/// Tabulated terms wrap an arbitrary callable and are integrated with a fixed-order
/// Gauss-Legendre rule on each interval.
class SourceTerm {
 public:
  using Callable = std::function<double(double)>;

  static SourceTerm zero();
  static SourceTerm constant(double c);
  static SourceTerm power(double c, double gamma);
  static SourceTerm tabulated(Callable f, int order = 20);
  static SourceTerm sum(std::span<const SourceTerm> parts);

  /// Returns a copy with every coefficient multiplied by `s`.
  SourceTerm scaled(double s) const;

  double operator()(double t) const;

  /// Integral over [a, b], 0 <= a < b.
  double integral(double a, double b) const;

  bool is_zero() const noexcept { return powers_.empty() && tabulated_.empty(); }
  bool has_tabulated() const noexcept { return !tabulated_.empty(); }
  const std::vector<PowerTerm>& powers() const noexcept { return powers_; }

  std::string describe() const;

 private:
  struct Tabulated {
    Callable f;
    int order;
    double scale;
  };
  std::vector<PowerTerm> powers_;
  std::vector<Tabulated> tabulated_;
};

SourceTerm operator+(const SourceTerm& a, const SourceTerm& b);

/// Fixed-order Gauss-Legendre rules available to tabulated sources.
bool supported_gauss_order(int order);

double source_interval_integral(const SourceTerm& s, double a, double b);

/// D^{alpha-1}(y' - y1) + lambda y = f,  y(0) = y0.
struct ScalarProblem {
  double y0 = 0.0;
  double y1 = 0.0;
  double lambda = 1.0;
  SourceTerm source = SourceTerm::zero();
};

struct SolutionHistory {
  Scheme scheme = Scheme::L1;
  double alpha = 0.0;
  double tau = 0.0;
  double lambda = 0.0;
  double mu = 0.0;  // lambda tau^alpha / 2
  std::vector<double> values;

  std::size_t steps() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double final_value() const { return values.back(); }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * tau; }
};

/// Runs `n` steps of the scheme. The kernel table must match alpha and have at least n levels.
SolutionHistory solve_scalar(const ScalarProblem& p, Scheme scheme, double alpha, double tau,
                             std::size_t n, const KernelTable& kt);

SolutionHistory solve_l1(const ScalarProblem& p, double alpha, double tau, std::size_t n,
                         const KernelTable& kt);
SolutionHistory solve_ml1(const ScalarProblem& p, double alpha, double tau, std::size_t n,
                          const KernelTable& kt);

/// Largest |lhs - rhs| / (1 + max|Y|) of the defining recurrence over all steps,
/// evaluated in long double directly from the definition (no shared code with the solver).
double recurrence_residual(const SolutionHistory& h, const ScalarProblem& p, const KernelTable& kt);

namespace detail {
/// Running sum with Neumaier compensation.
struct Compensated {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const noexcept { return sum + comp; }
};

/// sum_{j<k} d[k-j] * x[j] with compensated per-lane sums.
double history_dot(std::span<const double> d, std::span<const double> x, std::size_t k);
}  // namespace detail

}  // namespace fracwave
