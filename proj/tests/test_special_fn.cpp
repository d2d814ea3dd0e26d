#include <cmath>
#include <random>

#include "doctest.h"
#include "fracwave/errors.hpp"
#include "fracwave/special_fn.hpp"

using namespace fracwave;

TEST_CASE("gamma known values") {
  CHECK(fracwave::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fracwave::gamma(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
  CHECK(std::abs(fracwave::gamma(1.5) - 0.886226925452758013649) < 1e-15);
  CHECK_THROWS_AS(fracwave::gamma(0.0), DomainError);
  CHECK_THROWS_AS(fracwave::gamma(-1.5), DomainError);
}

TEST_CASE("gamma recurrence") {
  for (int i = 0; i < 100; ++i) {
    const double x = 0.5 + 4.5 * i / 99.0;
    CHECK(std::abs(fracwave::gamma(x + 1.0) - x * fracwave::gamma(x)) <= 1e-12 * fracwave::gamma(x + 1.0));
  }
}

TEST_CASE("zeta values") {
  CHECK(std::abs(zeta(2.0) - kPi * kPi / 6.0) < 1e-13);
  CHECK(std::abs(zeta(4.0) - std::pow(kPi, 4) / 90.0) < 1e-13);
  CHECK(std::abs(zeta(1.5) - 2.612375348685488343348) < 1e-13);
  CHECK(std::abs(zeta(1.1) - 10.5844484649508009509826) < 1e-12);
  CHECK_THROWS_AS(zeta(1.0), DomainError);
  CHECK_THROWS_AS(zeta(0.5), DomainError);
}

TEST_CASE("hurwitz zeta at a = 1/2") {
  // zeta(s, 1/2) = (2^s - 1) zeta(s)
  for (double s : {1.2, 1.5, 2.0, 3.7}) {
    CHECK(hurwitz_zeta(s, 0.5) == doctest::Approx((std::pow(2.0, s) - 1.0) * zeta(s)).epsilon(1e-13));
  }
}

TEST_CASE("cpow principal branch") {
  const Complex a = cpow(Complex(0, 1), 2.0);
  CHECK(std::abs(a - Complex(-1, 0)) < 1e-15);
  const Complex b = cpow(Complex(-1, 0), 0.5);
  CHECK(std::abs(b - Complex(0, 1)) < 1e-15);
  const Complex b2 = cpow(Complex(-1, -0.0), 0.5);
  CHECK(std::abs(b2 - Complex(0, 1)) < 1e-15);
  const Complex c = cpow(Complex(0, 2), -1.5);
  const Complex expect = std::pow(2.0, -1.5) * std::polar(1.0, -1.5 * kPi / 2.0);
  CHECK(std::abs(c - expect) < 1e-15);
  CHECK(cpow(Complex(0, 0), 1.5) == Complex(0, 0));
  CHECK_THROWS_AS(cpow(Complex(0, 0), -0.5), DomainError);
  CHECK_THROWS_AS(cpow(Complex(0, 0), 0.0), DomainError);
}

TEST_CASE("cpow conjugate symmetry") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const Complex z(u(rng), u(rng));
    if (z.imag() == 0.0) continue;
    const double p = u(rng);
    CHECK(std::abs(std::conj(cpow(z, p)) - cpow(std::conj(z), p)) <= 1e-14 * std::abs(cpow(z, p)));
  }
}

TEST_CASE("mittag-leffler trivial values") {
  CHECK(mittag_leffler({1.5, 1.0, 1e-12}, 0.0) == 1.0);
  CHECK(std::abs(mittag_leffler({1.0, 1.0, 1e-12}, -1.0) - std::exp(-1.0)) < 1e-14);
  CHECK(std::abs(mittag_leffler({1.0, 1.0, 1e-12}, -3.0) - std::exp(-3.0)) < 1e-12);
  CHECK(std::abs(mittag_leffler({2.0, 1.0, 1e-12}, -4.0) - std::cos(2.0)) < 1e-11);
  CHECK(std::abs(mittag_leffler({2.0, 2.0, 1e-12}, -9.0) - std::sin(3.0) / 3.0) < 1e-11);
}

TEST_CASE("mittag-leffler against high-precision values") {
  struct Row {
    double alpha, x, e1, e2, ea;
  };
  const Row rows[] = {
      {1.2, -0.5, 0.621403961032596331, 0.816479906913576038, 0.747345758055299282},
      {1.2, -1.0, 0.363512601950518906, 0.671694541375729089, 0.504515724744915006},
      {1.2, -2.0, 0.0783929265819005015, 0.466342148344664389, 0.214401255576467062},
      {1.2, -5.0, -0.0729601763057592017, 0.197046625576846560, -0.00726537671378607944},
      {1.2, -20.0, -0.00963990599421850802, 0.0436733761828083968, -0.000635546664224433142},
      {1.5, -0.5, 0.663236794872427957, 0.859544053398015807, 0.898863075546068762},
      {1.5, -1.0, 0.396629365318088084, 0.737482247901894714, 0.706528037064175794},
      {1.5, -2.0, 0.0294306856028264717, 0.539998692816669342, 0.413409659054908196},
      {1.5, -5.0, -0.300082050413130881, 0.204564443006479476, 0.00453970849644537943},
      {1.5, -20.0, 0.0195957479301875057, 0.0262168092037664640, 0.00619850124686134193},
      {1.8, -0.5, 0.719929936862155415, 0.897466373607531141, 0.944643104360279469},
      {1.8, -1.0, 0.474224470704456363, 0.802582972011135510, 0.826133211125303517},
      {1.8, -2.0, 0.0747690507325417050, 0.633982768470176980, 0.618061160765892333},
      {1.8, -5.0, -0.558531212734304617, 0.269168672242330816, 0.184260135871504999},
      {1.8, -20.0, 0.201842704498982592, -0.0698743967708645778, -0.0928682060495225744},
  };
  for (const auto& r : rows) {
    CAPTURE(r.alpha);
    CAPTURE(r.x);
    CHECK(std::abs(mittag_leffler({r.alpha, 1.0, 1e-12}, r.x) - r.e1) < 1e-11);
    CHECK(std::abs(mittag_leffler({r.alpha, 2.0, 1e-12}, r.x) - r.e2) < 1e-11);
    CHECK(std::abs(mittag_leffler({r.alpha, r.alpha, 1e-12}, r.x) - r.ea) < 1e-11);
  }
  CHECK(std::abs(mittag_leffler({1.5, 2.7, 1e-12}, -1.0) - 0.531340789365295358) < 1e-12);
}

TEST_CASE("mittag-leffler branches agree near the switch radius") {
  for (double alpha : {1.2, 1.5, 1.8}) {
    for (double beta : {1.0, 2.0, alpha}) {
      for (double x : {-0.7, -0.9, -1.0, -1.1, -1.4}) {
        const MlParams p{alpha, beta, 1e-13};
        CAPTURE(alpha);
        CAPTURE(beta);
        CAPTURE(x);
        CHECK(std::abs(detail::mittag_leffler_series(p, x) - detail::mittag_leffler_contour(p, x)) < 1e-10);
      }
    }
  }
}

TEST_CASE("mittag-leffler argument validation") {
  CHECK_THROWS_AS(mittag_leffler({1.5, 1.0, 0.0}, -1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler({1.5, 1.0, 1e-12}, 0.5), DomainError);
  CHECK_THROWS_AS(mittag_leffler({2.5, 1.0, 1e-12}, -1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler({1.5, -1.0, 1e-12}, -1.0), DomainError);
}
