#include "fracwave/ode_stepper.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "fracwave/errors.hpp"

namespace fracwave {

namespace {

template <int N>
double gauss_fixed(const SourceTerm::Callable& f, double a, double b) {
  return boost::math::quadrature::gauss<double, N>::integrate(f, a, b);
}

double gauss_dispatch(const SourceTerm::Callable& f, int order, double a, double b) {
  switch (order) {
    case 4: return gauss_fixed<4>(f, a, b);
    case 8: return gauss_fixed<8>(f, a, b);
    case 10: return gauss_fixed<10>(f, a, b);
    case 16: return gauss_fixed<16>(f, a, b);
    case 20: return gauss_fixed<20>(f, a, b);
    case 30: return gauss_fixed<30>(f, a, b);
    case 50: return gauss_fixed<50>(f, a, b);
    default: throw DomainError("unsupported Gauss order " + std::to_string(order));
  }
}

// c (b^{g+1} - a^{g+1}) / (g+1), written so small intervals far from 0 keep their digits.
double power_integral(const PowerTerm& t, double a, double b) {
  const double e = t.exponent + 1.0;
  if (a == 0.0) return t.coeff * std::pow(b, e) / e;
  const double ratio = (b - a) / a;
  return t.coeff * std::pow(a, e) * std::expm1(e * std::log1p(ratio)) / e;
}

}  // namespace

bool supported_gauss_order(int order) {
  constexpr std::array<int, 7> kOrders = {4, 8, 10, 16, 20, 30, 50};
  for (int o : kOrders) {
    if (o == order) return true;
  }
  return false;
}

SourceTerm SourceTerm::zero() { return {}; }

SourceTerm SourceTerm::constant(double c) { return power(c, 0.0); }

SourceTerm SourceTerm::power(double c, double gamma) {
  if (!(gamma > -1.0)) throw DomainError("power source needs exponent > -1");
  if (!std::isfinite(c)) throw DomainError("power source coefficient must be finite");
  SourceTerm s;
  if (c != 0.0) s.powers_.push_back({c, gamma});
  return s;
}

SourceTerm SourceTerm::tabulated(Callable f, int order) {
  if (!f) throw DomainError("tabulated source needs a callable");
  if (!supported_gauss_order(order)) throw DomainError("unsupported Gauss order");
  SourceTerm s;
  s.tabulated_.push_back({std::move(f), order, 1.0});
  return s;
}

SourceTerm SourceTerm::sum(std::span<const SourceTerm> parts) {
  SourceTerm s;
  for (const auto& p : parts) {
    s.powers_.insert(s.powers_.end(), p.powers_.begin(), p.powers_.end());
    s.tabulated_.insert(s.tabulated_.end(), p.tabulated_.begin(), p.tabulated_.end());
  }
  return s;
}

SourceTerm operator+(const SourceTerm& a, const SourceTerm& b) {
  const std::array<SourceTerm, 2> parts = {a, b};
  return SourceTerm::sum(parts);
}

SourceTerm SourceTerm::scaled(double s) const {
  SourceTerm out = *this;
  for (auto& p : out.powers_) p.coeff *= s;
  for (auto& t : out.tabulated_) t.scale *= s;
  return out;
}

double SourceTerm::operator()(double t) const {
  double v = 0.0;
  for (const auto& p : powers_) v += p.coeff * std::pow(t, p.exponent);
  for (const auto& tab : tabulated_) v += tab.scale * tab.f(t);
  return v;
}

double SourceTerm::integral(double a, double b) const {
  if (!(a >= 0.0 && b > a)) throw DomainError("source integral needs 0 <= a < b");
  double v = 0.0;
  for (const auto& p : powers_) v += power_integral(p, a, b);
  for (const auto& tab : tabulated_) v += tab.scale * gauss_dispatch(tab.f, tab.order, a, b);
  return v;
}

std::string SourceTerm::describe() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& p : powers_) {
    if (!first) os << " + ";
    first = false;
    os << p.coeff;
    if (p.exponent != 0.0) os << "*t^" << p.exponent;
  }
  for (const auto& t : tabulated_) {
    if (!first) os << " + ";
    first = false;
    os << t.scale << "*g(t)[gauss" << t.order << "]";
  }
  return os.str();
}

double source_interval_integral(const SourceTerm& s, double a, double b) {
  return s.integral(a, b);
}

namespace detail {

double history_dot(std::span<const double> d, std::span<const double> x, std::size_t k) {
  constexpr std::size_t kLanes = 8;
  std::array<double, kLanes> sum{};
  std::array<double, kLanes> comp{};
  std::size_t j = 0;
  for (; j + kLanes <= k; j += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double term = d[k - j - l] * x[j + l];
      const double y = term - comp[l];
      const double t = sum[l] + y;
      comp[l] = (t - sum[l]) - y;
      sum[l] = t;
    }
  }
  double total = 0.0;
  double c = 0.0;
  auto add = [&](double v) {  // Neumaier
    const double t = total + v;
    c += std::abs(total) >= std::abs(v) ? (total - t) + v : (v - t) + total;
    total = t;
  };
  for (std::size_t l = 0; l < kLanes; ++l) {
    add(sum[l]);
    add(-comp[l]);
  }
  for (; j < k; ++j) add(d[k - j] * x[j]);
  return total + c;
}

}  // namespace detail

SolutionHistory solve_scalar(const ScalarProblem& p, Scheme scheme, double alpha, double tau,
                             std::size_t n, const KernelTable& kt) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("time step must be positive");
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) throw DomainError("lambda must be >= 0");
  if (kt.alpha() != alpha) throw ConfigError("kernel table built for a different alpha");
  if (kt.levels() < n) throw ConfigError("kernel table has too few levels");

  SolutionHistory h;
  h.scheme = scheme;
  h.alpha = alpha;
  h.tau = tau;
  h.lambda = p.lambda;
  h.mu = p.lambda * std::pow(tau, alpha) / 2.0;
  h.values.assign(n + 1, 0.0);
  h.values[0] = p.y0;
  if (n == 0) return h;

  const auto d = kt.differences(scheme);
  const double mu = h.mu;
  const double pivot = d[0] + mu;
  const double src_scale = std::pow(tau, alpha - 1.0);
  const bool has_source = !p.source.is_zero();

  // Unknowns are the second differences D[j] = Y_{j+1} - 2 Y_j + Y_{j-1} (Y_{-1} := Y_0).
  // Solving for D directly and summing V_k = Y_{k+1} - Y_k and Y with compensation avoids the
  // cancellation in Y_{k+1} - 2 Y_k + Y_{k-1}, which otherwise grows like n^2 eps.
  std::vector<double> D(n, 0.0);
  auto& Y = h.values;
  detail::Compensated y{p.y0};
  detail::Compensated v{0.0};
  for (std::size_t k = 0; k < n; ++k) {
    double rhs = tau * p.y1 * d[k];
    if (has_source) rhs += src_scale * p.source.integral(tau * k, tau * (k + 1));
    rhs -= detail::history_dot(d, D, k);
    if (mu != 0.0) rhs -= mu * (2.0 * y.value() + v.value());
    D[k] = rhs / pivot;
    v.add(D[k]);
    y.add(v.value());
    Y[k + 1] = y.value();
    if (!std::isfinite(Y[k + 1])) throw NumericalError("scalar recurrence overflowed at step " + std::to_string(k + 1));
  }
  return h;
}

SolutionHistory solve_l1(const ScalarProblem& p, double alpha, double tau, std::size_t n,
                         const KernelTable& kt) {
  return solve_scalar(p, Scheme::L1, alpha, tau, n, kt);
}

SolutionHistory solve_ml1(const ScalarProblem& p, double alpha, double tau, std::size_t n,
                          const KernelTable& kt) {
  return solve_scalar(p, Scheme::ML1, alpha, tau, n, kt);
}

double recurrence_residual(const SolutionHistory& h, const ScalarProblem& p, const KernelTable& kt) {
  using LD = long double;
  const auto& Y = h.values;
  const std::size_t n = h.steps();
  const auto seq = h.scheme == Scheme::L1 ? kt.b() : kt.beta();
  auto diff = [&](std::size_t j) { return static_cast<LD>(seq[j + 1]) - static_cast<LD>(seq[j]); };
  LD ymax = 0.0L;
  for (double v : Y) ymax = std::max(ymax, std::abs(static_cast<LD>(v)));
  const LD mu = static_cast<LD>(h.lambda) * std::pow(static_cast<LD>(h.tau), static_cast<LD>(h.alpha)) / 2.0L;
  LD worst = 0.0L;
  for (std::size_t k = 0; k < n; ++k) {
    LD lhs = (static_cast<LD>(Y[1]) - Y[0]) * diff(k);
    for (std::size_t j = 1; j <= k; ++j) {
      lhs += (static_cast<LD>(Y[j + 1]) - 2.0L * Y[j] + Y[j - 1]) * diff(k - j);
    }
    lhs += mu * (static_cast<LD>(Y[k]) + Y[k + 1]);
    LD rhs = static_cast<LD>(h.tau) * p.y1 * diff(k);
    if (!p.source.is_zero()) {
      rhs += std::pow(static_cast<LD>(h.tau), static_cast<LD>(h.alpha) - 1.0L) *
             p.source.integral(h.tau * k, h.tau * (k + 1));
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return static_cast<double>(worst / (1.0L + ymax));
}

}  // namespace fracwave
