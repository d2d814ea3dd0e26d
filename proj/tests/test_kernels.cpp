#include <cmath>
#include <random>

#include "doctest.h"
#include "fracwave/errors.hpp"
#include "fracwave/kernels.hpp"

using namespace fracwave;

namespace {

const double kAlphas[] = {1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9};

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("kernel table entries") {
  const KernelTable kt(1.5, 16);
  REQUIRE(kt.b().size() == 18);
  REQUIRE(kt.db().size() == 17);
  CHECK(kt.b()[0] == 0.0);
  CHECK(std::abs(kt.b()[1] - 1.128379167095512573896) < 1e-15);
  CHECK(std::abs(kt.beta1_correction() - 0.234574485390577687491) < 1e-14);
  CHECK(std::abs(kt.beta()[1] - kt.b()[1] - kt.beta1_correction()) < 1e-15);
  for (std::size_t k = 0; k < kt.b().size(); ++k) {
    if (k != 1) CHECK(kt.beta()[k] == kt.b()[k]);
  }
  CHECK(kt.dbeta()[0] == doctest::Approx(kt.beta()[1]).epsilon(1e-15));
  CHECK(kt.dbeta()[1] == doctest::Approx(kt.beta()[2] - kt.beta()[1]).epsilon(1e-14));
  CHECK_THROWS_AS(KernelTable(1.0, 4), DomainError);
  CHECK_THROWS_AS(KernelTable(2.0, 4), DomainError);
  CHECK_THROWS_AS(KernelTable(1.5, 0), DomainError);
}

TEST_CASE("beta1 correction matches the defining series") {
  // Partial sums of 2 sin(a pi/2) sum (2 k pi)^{a-3} with an Euler-Maclaurin tail.
  for (double a : kAlphas) {
    const double p = a - 3.0;
    const int K = 2000;
    long double s = 0.0L;
    for (int k = K; k >= 1; --k) s += std::pow(2.0L * kPi * k, static_cast<long double>(p));
    const double x = 2.0 * kPi * K;
    const double tail = -std::pow(x + kPi, p + 1.0) / ((p + 1.0) * 2.0 * kPi);
    const double series = 2.0 * std::sin(a * kPi / 2.0) * (static_cast<double>(s) + tail);
    CAPTURE(a);
    CHECK(std::abs(series - beta1_correction(a)) < 1e-9);
  }
}

TEST_CASE("weights are increasing with decreasing positive differences") {
  for (double a : kAlphas) {
    const KernelTable kt(a, 10000);
    const auto b = kt.b();
    const auto d = kt.db();
    bool ok = true;
    for (std::size_t k = 1; k < b.size(); ++k) ok = ok && b[k] > b[k - 1];
    for (std::size_t j = 1; j + 1 < d.size(); ++j) ok = ok && d[j] > 0.0 && d[j + 1] < d[j];
    CAPTURE(a);
    CHECK(ok);
    CHECK(kt.beta()[1] > kt.b()[1]);
  }
}

TEST_CASE("weight differences are accurate for large index") {
  const KernelTable kt(1.7, 1 << 16);
  const std::size_t j = (1 << 16) - 1;
  const long double p = 0.3L;
  const long double exact = (std::pow(static_cast<long double>(j + 1), p) - std::pow(static_cast<long double>(j), p)) /
                            static_cast<long double>(fracwave::gamma(1.3));
  CHECK(std::abs(kt.db()[j] - static_cast<double>(exact)) < 1e-12 * static_cast<double>(exact));
}

TEST_CASE("bhat against polylogarithm values") {
  struct Row {
    double alpha, x, y, re, im;
  };
  const Row rows[] = {
      {1.5, 1.2, 0.4, 0.427649629225441696, -0.311769749405700475},
      {1.7, 0.05, 0.02, 38.9385138209255774, -21.1772137678600038},
      {1.2, -0.3, 1.0, -1.04314418342244041, 0.198498901784495348},
      {1.9, 0.7, -3.5, -0.335108267114796538, -0.0792142432970104367},
      {1.5, 5.0, 1.0, 0.00407715246037408343, -0.00646362683579403547},
      {1.5, 0.3, 1.0, -0.549488148919140469, -0.848734331650897796},
      {1.3, 0.1, -2.5, -0.378381759796530323, 0.0603273276478520617},
      {1.8, 0.5, 3.0, -0.383990843245409847, -0.031104754159058729},
  };
  for (const auto& r : rows) {
    CAPTURE(r.alpha);
    CAPTURE(r.x);
    CAPTURE(r.y);
    CHECK(close(bhat(r.alpha, {r.x, r.y}), {r.re, r.im}, 1e-12));
  }
}

TEST_CASE("bhat truncated series at Re z = 5") {
  const KernelTable kt(1.5, 30);
  const Complex z(5.0, 0.7);
  Complex s = 0.0;
  for (int k = 1; k <= 20; ++k) s += kt.b()[k] * std::exp(-static_cast<double>(k) * z);
  CHECK(std::abs(bhat(1.5, z) - s) <= 1e-10);
  const Complex z3(3.0, -1.1);
  Complex s3 = 0.0;
  for (int k = 1; k <= 30; ++k) s3 += kt.beta()[k] * std::exp(-static_cast<double>(k) * z3);
  CHECK(std::abs(betahat(1.5, z3) - s3) <= 1e-10);
}

TEST_CASE("bhat series and bilateral branches agree on the overlap") {
  // Re z >= 1 uses the series; nudging below 1 switches to the bilateral sum.
  for (double a : {1.2, 1.5, 1.8}) {
    for (double y : {-3.0, -1.0, 0.0, 0.5, 2.9, 6.0}) {
      const Complex hi(1.0, y), lo(std::nextafter(1.0, 0.0), y);
      CAPTURE(a);
      CAPTURE(y);
      CHECK(close(bhat(a, hi), bhat(a, lo), 1e-10));
    }
  }
}

TEST_CASE("bhat periodicity and conjugate symmetry") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0.05, 2.0), uy(-6.0, 6.0);
  for (int i = 0; i < 50; ++i) {
    const Complex z(ux(rng), uy(rng));
    CHECK(close(std::conj(bhat(1.4, z)), bhat(1.4, std::conj(z)), 1e-13));
    CHECK(close(bhat(1.4, z + Complex(0, 2 * kPi)), bhat(1.4, z), 1e-10));
    CHECK(close(std::conj(psi(1.4, z)), psi(1.4, std::conj(z)), 1e-13));
  }
}

TEST_CASE("bhat domain errors") {
  CHECK_THROWS_AS(bhat(1.5, Complex(0.0, 0.0)), DomainError);
  CHECK_THROWS_AS(bhat(1.5, Complex(-1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(bhat(1.5, Complex(-0.5, 7.0)), DomainError);
  CHECK_THROWS_AS(bhat_regular(1.5, Complex(0.0, 7.0)), DomainError);
}

TEST_CASE("bhat minus leading singularity stays bounded at the origin") {
  const Complex dir = std::polar(1.0, 2.0);
  const double ref = std::abs(bhat_regular(1.5, 0.0));
  for (double r : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const Complex z = r * dir;
    CHECK(std::abs(bhat(1.5, z) - cpow(z, -1.5)) < 2.0 * ref + 1.0);
  }
}

TEST_CASE("betahat minus leading singularity vanishes at the origin") {
  for (double a : kAlphas) {
    CAPTURE(a);
    CHECK(std::abs(betahat_regular(a, 0.0)) < 1e-12);
    for (double th : {0.0, 1.0, 2.0}) {
      const Complex z = std::polar(1e-9, th);
      CHECK(std::abs(betahat_regular(a, z)) < 1e-8);
    }
  }
  for (double r : {1e-1, 1e-3, 1e-5}) {
    const Complex z = std::polar(r, 1.9);
    CHECK(std::abs(betahat(1.4, z) - cpow(z, -1.6)) < 10.0 * r);
  }
}

TEST_CASE("betahat and Psi relations") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.01, 3.0), uy(-3.0, 3.0);
  const double c = beta1_correction(1.6);
  for (int i = 0; i < 20; ++i) {
    const Complex z(ux(rng), uy(rng));
    CHECK(close(betahat(1.6, z) - bhat(1.6, z), c * std::exp(-z), 1e-12));
    const Complex em1 = std::exp(z) - 1.0;
    CHECK(close(Psi(1.6, z) - psi(1.6, z), c * std::exp(-2.0 * z) * em1 * em1 * em1, 1e-11));
  }
}

TEST_CASE("psi behaves like z^alpha near the origin") {
  const double r = 1e-4;
  const Complex z = std::polar(r, 2.0);
  const Complex ratio = psi(1.3, z) / (std::pow(r, 1.3) * std::polar(1.0, 1.3 * 2.0));
  CHECK(std::abs(ratio - 1.0) <= 1e-3);
}

TEST_CASE("cexpm1 accuracy") {
  const Complex z(1e-12, -2e-12);
  CHECK(close(cexpm1(z), z + 0.5 * z * z, 1e-15));
  const Complex w(0.7, 2.1);
  CHECK(close(cexpm1(w), std::exp(w) - 1.0, 1e-15));
}

TEST_CASE("cosine series A is negative and drives the imaginary-axis sign") {
  for (double a : kAlphas) {
    bool neg = true, pos = true;
    for (int i = 1; i <= 1000; ++i) {
      const double y = kPi * i / 1001.0;
      const double A = cosine_series_A(a, y);
      neg = neg && A < 0.0;
      const Complex iy(0.0, y);
      const double im = std::imag(psi(a, iy) / (1.0 + std::exp(iy)));
      const double expect = 4.0 * A * (std::cos(y) - 1.0) * std::sin(y) /
                            std::norm(std::exp(iy) + std::exp(2.0 * iy));
      pos = pos && im > 0.0 && std::abs(im - expect) <= 1e-9 * std::abs(expect);
    }
    CAPTURE(a);
    CHECK(neg);
    CHECK(pos);
    CHECK(std::abs(psi(a, Complex(0.0, kPi)) - 8.0 * cosine_series_A(a, kPi)) < 1e-12);
  }
}

TEST_CASE("re-positivity on the imaginary axis") {
  for (double a : kAlphas) {
    bool ok = true;
    double ratio_min = 1e300;
    for (int i = 1; i <= 500; ++i) {
      const double y = kPi * i / 500.0;
      const double rb = re_positivity(Scheme::ML1, a, y);
      const double r1 = re_positivity(Scheme::L1, a, y);
      ok = ok && rb > 0.0 && r1 > 0.0;
      ratio_min = std::min(ratio_min, rb / r1);
    }
    CAPTURE(a);
    CHECK(ok);
    CHECK(ratio_min > 0.0);
  }
}

TEST_CASE("re-positivity matches high-precision values") {
  // 2 (1 - cos y) sin(a pi/2) sum_k [(2k pi - y)^{a-3} + (2k pi + y - 2 pi)^{a-3} - 2 cos y (2k pi)^{a-3}], a = 1.6
  const double y[] = {0.3, 1.5, 3.0};
  const double expect[] = {0.2844367856347701264, 1.1197688639500201473, 2.9181200366200945665};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(re_positivity(Scheme::ML1, 1.6, y[i]) - expect[i]) < 1e-13);
  }
}

TEST_CASE("denominator certificate on the default contour") {
  const MarginReport rep = certify_denominator(1.5, 0.1, ContourSpec{});
  CHECK(rep.certified);
  CHECK(rep.margin > 0.0);
  CHECK(rep.samples >= 10000);
  CHECK(rep.enclosed_zeros == 0);
  for (double a : kAlphas) {
    const ContourSpec spec = default_contour(a);
    CHECK(spec.theta > kPi / 2);
    CHECK(spec.theta < theta_upper(a));
    for (double mu : {1e-3, 0.1, 1.0}) {
      const MarginReport r = certify_denominator(a, mu, spec, Scheme::L1, 4000);
      CAPTURE(a);
      CAPTURE(mu);
      CHECK(r.certified);
    }
  }
  CHECK_THROWS_AS(certify_denominator(1.5, 0.0, ContourSpec{}), DomainError);
}

TEST_CASE("large mu is reported, and select_contour finds a certified angle") {
  const MarginReport rep = certify_denominator(1.8, 1e6, default_contour(1.8));
  MESSAGE("alpha=1.8 mu=1e6 margin=" << rep.margin << " zeros=" << rep.enclosed_zeros);
  const ContourSpec s = select_contour(1.8, 1e6, default_contour(1.8));
  CHECK(certify_denominator(1.8, 1e6, s).certified);
}
