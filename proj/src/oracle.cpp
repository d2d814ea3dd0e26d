#include "fracwave/oracle.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "fracwave/errors.hpp"
#include "fracwave/quadrature.hpp"

namespace fracwave {

namespace {

double exact_mittag_leffler(const ExactEval& e, double t) {
  const auto& p = e.problem;
  const double a = e.alpha;
  const double x = -p.lambda * std::pow(t, a);
  auto ml = [&](double beta, double arg) { return mittag_leffler({a, beta, 0.1 * e.tolerance}, arg); };
  double y = 0.0;
  if (p.y0 != 0.0) y += p.y0 * ml(1.0, x);
  if (p.y1 != 0.0) y += p.y1 * t * ml(2.0, x);
  for (const auto& term : p.source.powers()) {
    const double g = term.exponent;
    y += term.coeff * gamma(g + 1.0) * std::pow(t, a + g) * ml(a + g + 1.0, x);
  }
  if (p.source.has_tabulated()) {
    // int_0^t s^{a-1} E_{a,a}(-l s^a) f_tab(t - s) ds; power terms are handled above,
    // so subtract them from the full source before convolving.
    auto kernel = [&](double s) {
      double ftab = p.source(t - s);
      for (const auto& term : p.source.powers()) ftab -= term.coeff * std::pow(t - s, term.exponent);
      return std::pow(s, a - 1.0) * ml(a, -p.lambda * std::pow(s, a)) * ftab;
    };
    // Both ends can be singular: s^{a-1} at 0 and the source at t - s -> 0.
    auto mirrored = [&](double u) { return kernel(t - u); };
    y += quad::adaptive_graded(kernel, 0.0, 0.5 * t, e.tolerance, 8, 3.0).value;
    y += quad::adaptive_graded(mirrored, 0.0, 0.5 * t, e.tolerance, 8, 3.0).value;
  }
  return y;
}

double exact_contour(const ExactEval& e, double t) {
  const auto& p = e.problem;
  if (p.source.has_tabulated()) throw DomainError("exact_scalar: contour path needs a power-law source");
  const double a = e.alpha;
  const double ell = p.lambda * std::pow(t, a);

  struct Term {
    double coeff;
    double power;  // of w
  };
  std::vector<Term> terms;
  if (p.y0 != 0.0) terms.push_back({p.y0, a - 1.0});
  if (p.y1 != 0.0) terms.push_back({t * p.y1, a - 2.0});
  for (const auto& s : p.source.powers()) {
    const double g = s.exponent;
    terms.push_back({s.coeff * gamma(g + 1.0) * std::pow(t, g + a), -g - 1.0});
  }
  if (terms.empty()) return 0.0;

  // Near 0 the integrand behaves like w^{power} / ell (or w^{power - a} when ell = 0).
  bool integrable = true;
  for (const auto& term : terms) {
    const double lead = ell > 0.0 ? term.power : term.power - a;
    if (!(lead > -1.0)) integrable = false;
  }

  // Any angle in (pi/2, pi/alpha) keeps the poles w^a = -ell to the left of the contour.
  const double theta = 0.5 * (0.5 * kPi + kPi / a);
  auto integrand = [&](Complex w) {
    Complex num = 0.0;
    for (const auto& term : terms) num += term.coeff * cpow(w, term.power);
    return std::exp(w) * num / (cpow(w, a) + ell);
  };
  quad::ContourGeometry g;
  g.phi = theta;
  g.eps = integrable ? 0.0 : 0.5;
  g.split = 1.0;
  const double log_eps = -std::log(std::numeric_limits<double>::epsilon());
  g.radius = (log_eps + 10.0) / std::abs(std::cos(theta));
  g.panels = 32;
  const quad::Result r = quad::symmetric_contour(integrand, g, 0.1 * e.tolerance);
  if (r.error > e.tolerance) throw AccuracyError("exact_scalar: contour quadrature", r.error);
  return r.value;
}

template <class F>
double upsilon1_integral(F&& f, const ContourSpec& spec, double tolerance) {
  quad::ContourGeometry g;
  g.phi = spec.theta;
  g.eps = 0.0;
  g.radius = kPi / std::sin(spec.theta);
  g.split = std::min(0.25, g.radius);
  g.panels = std::max(spec.panels, 4);
  g.grading = spec.grading;
  const quad::Result r = quad::symmetric_contour(f, g, tolerance);
  if (r.error > 10.0 * tolerance) throw AccuracyError("discrete contour quadrature", r.error);
  return r.value;
}

void require_certificate(Scheme scheme, double alpha, double mu, const ContourSpec& spec) {
  // Callers typically sweep k for one (alpha, mu, theta); remember the last few verdicts.
  using Key = std::tuple<int, double, double, double>;
  thread_local std::map<Key, MarginReport> cache;
  const Key key{static_cast<int>(scheme), alpha, mu, spec.theta};
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (cache.size() > 256) cache.clear();
    it = cache.emplace(key, certify_denominator(alpha, mu, spec, scheme, 4000)).first;
  }
  const MarginReport& rep = it->second;
  if (!rep.certified) {
    throw CertificateError("denominator certificate failed for this (alpha, mu, theta)", rep.margin);
  }
}

}  // namespace

double exact_scalar(const ExactEval& e, double t) {
  if (!(t > 0.0)) throw DomainError("exact_scalar: t must be positive");
  if (!(e.tolerance > 0.0)) throw DomainError("exact_scalar: tolerance must be positive");
  if (!(e.alpha > 1.0 && e.alpha < 2.0)) throw DomainError("exact_scalar: alpha outside (1, 2)");
  if (!(e.problem.lambda >= 0.0)) throw DomainError("exact_scalar: lambda must be >= 0");
  return e.method == ExactMethod::MittagLeffler ? exact_mittag_leffler(e, t) : exact_contour(e, t);
}

double discrete_contour(Scheme scheme, double alpha, double mu, double tau, const ContourSpec& spec,
                        double y0, double y1, std::size_t k, double tolerance) {
  if (k == 0) return y0;
  if (y0 == 0.0 && y1 == 0.0) return 0.0;
  require_certificate(scheme, alpha, mu, spec);
  const double kd = static_cast<double>(k);
  auto f = [&](Complex z) {
    const Complex em1 = cexpm1(z);
    const Complex bh = transform(scheme, alpha, z);
    const Complex sym = std::exp(-z) * em1 * em1 * em1 * bh;
    const Complex num = (em1 * em1 * bh - 0.5 * sym + 0.5 * mu * em1) * y0 + tau * em1 * bh * y1;
    return std::exp(kd * z) * num / (sym + mu * (std::exp(z) + 1.0));
  };
  return upsilon1_integral(f, spec, tolerance);
}

double discrete_resolvent(Scheme scheme, double alpha, double mu, const ContourSpec& spec, std::size_t j,
                          double tolerance) {
  require_certificate(scheme, alpha, mu, spec);
  const double jd = static_cast<double>(j);
  auto f = [&](Complex z) {
    return std::exp(jd * z) / (symbol(scheme, alpha, z) + mu * (std::exp(z) + 1.0));
  };
  return upsilon1_integral(f, spec, tolerance);
}

double discrete_source_part(std::span<const double> resolvent, const SourceTerm& f, double alpha,
                            double tau, std::size_t k) {
  if (resolvent.size() < k) throw DomainError("discrete_source_part: need E_1..E_k");
  double s = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    s += resolvent[k - j - 1] * f.integral(tau * j, tau * (j + 1));
  }
  return std::pow(tau, alpha - 1.0) * s;
}

std::size_t nesting_ratio(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw ConfigError("nesting: steps must be positive");
  const double r = a / b;
  const double ri = std::round(r);
  if (ri < 1.0 || std::abs(r - ri) > 1e-9 * r) {
    throw ConfigError("nesting: " + std::to_string(a) + " is not an integer multiple of " + std::to_string(b));
  }
  return static_cast<std::size_t>(ri);
}

double FineReference::at(double tau, std::size_t k) const {
  const std::size_t r = nesting_ratio(tau, history.tau);
  if (k * r >= history.values.size()) throw ConfigError("reference does not reach the requested time");
  return history.values[k * r];
}

std::vector<double> FineReference::sampled(double tau) const {
  const std::size_t r = nesting_ratio(tau, history.tau);
  std::vector<double> out;
  for (std::size_t i = 0; i < history.values.size(); i += r) out.push_back(history.values[i]);
  return out;
}

FineReference fine_grid_reference(Scheme scheme, const ScalarProblem& p, double alpha, double tau_ref,
                                  double T, std::span<const double> study_steps) {
  for (double tau : study_steps) {
    if (nesting_ratio(tau, tau_ref) < 8) {
      throw ConfigError("reference step must be at least 8 times finer than every study step");
    }
  }
  const std::size_t n = nesting_ratio(T, tau_ref);
  const KernelTable kt(alpha, n);
  return {solve_scalar(p, scheme, alpha, tau_ref, n, kt)};
}

}  // namespace fracwave
