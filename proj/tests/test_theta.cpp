#include <cmath>
#include <random>

#include "doctest.h"
#include "tpms/error.hpp"
#include "tpms/theta.hpp"

using namespace tpms;

namespace {

// Independent oracle: the Jacobi triple product
// theta(z) = 2 q^{1/4} sin(pi z) prod (1 - q^{2n})(1 - 2 q^{2n} cos(2 pi z) + q^{4n}).
cplx theta_product(cplx z, double d) {
  const double q = std::exp(-kPi * d);
  cplx acc = 2.0 * std::pow(q, 0.25) * std::sin(kPi * z);
  for (int n = 1; n < 200; ++n) {
    const double q2n = std::pow(q, 2 * n);
    if (q2n < 1e-30) break;
    acc *= (1.0 - q2n) * (1.0 - 2.0 * q2n * std::cos(2.0 * kPi * z) + q2n * q2n);
  }
  return acc;
}

}  // namespace

TEST_CASE("theta agrees with the triple product") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double d : {0.3, 0.5, 1.0, 2.0, 4.0}) {
    const TorusParams t(d);
    for (int k = 0; k < 200; ++k) {
      const cplx z(u(rng), (u(rng) - 0.5) * d);
      const cplx ref = theta_product(z, d);
      CHECK(std::abs(theta(z, t) - ref) <= 1e-12 * std::abs(ref) + 1e-300);
    }
  }
}

TEST_CASE("transformation laws hold on random points") {
  for (double d : {0.5, 1.0, 2.0}) {
    const auto e = theta_identity_errors(TorusParams(d), 1000, 3);
    CHECK(e.odd < 1e-10);
    CHECK(e.shift_one < 1e-10);
    CHECK(e.shift_tau < 1e-10);
    CHECK(e.real_axis < 1e-10);
    CHECK(e.log_deriv < 1e-10);
  }
}

TEST_CASE("theta has simple zeros on the lattice only") {
  const TorusParams t(1.0);
  CHECK(std::abs(theta(0.0, t)) < 1e-15);
  CHECK(std::abs(theta(cplx(1.0, 0.0), t)) < 1e-14);
  CHECK(std::abs(theta(t.tau(), t)) < 1e-14);
  CHECK(std::abs(theta(cplx(0.5, 0.0), t)) > 0.1);
  CHECK(std::abs(theta_prime(0.0, t)) > 0.1);
}

TEST_CASE("theta_prime matches a central difference") {
  const TorusParams t(0.8);
  const double h = 1e-5;
  for (cplx z : {cplx(0.3, 0.1), cplx(0.71, -0.2), cplx(0.05, 0.35)}) {
    const cplx fd = (theta(z + h, t) - theta(z - h, t)) / (2.0 * h);
    CHECK(std::abs(theta_prime(z, t) - fd) < 1e-8 * std::abs(fd));
  }
}

TEST_CASE("log_deriv guards the lattice") {
  const TorusParams t(1.0);
  CHECK_THROWS_AS(log_deriv(cplx(1e-9, 0.0), t), Error);
  CHECK(std::abs(log_deriv(cplx(0.5, 0.0), t)) < 1e-12);  // theta is even about 1/2
}

TEST_CASE("log_theta branches exponentiate to theta and step by -+ i pi") {
  const TorusParams t(1.0);
  for (cplx w : {cplx(0.3, 0.0), cplx(0.3, 0.4), cplx(0.8, 0.2), cplx(-0.4, 0.1)}) {
    const cplx up = log_theta(w, t, HalfStrip::Upper);
    CHECK(std::abs(std::exp(up) - theta(w, t)) < 1e-13 * std::abs(theta(w, t)));
    const cplx up1 = log_theta(w + 1.0, t, HalfStrip::Upper);
    CHECK(std::abs(up1 - up + cplx(0.0, kPi)) < 1e-12);
  }
  for (cplx w : {cplx(0.3, 0.0), cplx(0.3, -0.4), cplx(-0.6, -0.2)}) {
    const cplx lo = log_theta(w, t, HalfStrip::Lower);
    CHECK(std::abs(std::exp(lo) - theta(w, t)) < 1e-13 * std::abs(theta(w, t)));
    const cplx lo1 = log_theta(w + 1.0, t, HalfStrip::Lower);
    CHECK(std::abs(lo1 - lo - cplx(0.0, kPi)) < 1e-12);
  }
  // real on (0,1) for the upper branch, imaginary part pi on (-1,0)
  CHECK(std::abs(log_theta(cplx(0.4, 0.0), t, HalfStrip::Upper).imag()) < 1e-15);
  CHECK(log_theta(cplx(-0.4, 0.0), t, HalfStrip::Upper).imag() == doctest::Approx(kPi));
  CHECK(log_theta(cplx(-0.4, 0.0), t, HalfStrip::Lower).imag() == doctest::Approx(-kPi));
}

TEST_CASE("torus parameter validation") {
  CHECK_THROWS_AS(TorusParams(0.01), Error);
  CHECK_THROWS_AS(TorusParams(-1.0), Error);
  CHECK_THROWS_AS(TorusParams(std::nan("")), Error);
  try {
    TorusParams bad(0.01);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainTooThin);
  }
  const TorusParams t(1.0);
  CHECK(t.strip_height() == 0.5);
  CHECK(t.nome() == doctest::Approx(std::exp(-kPi)));
  CHECK(series_terms(1.0) >= 3);
  CHECK(series_terms(0.5) > series_terms(2.0));
}

TEST_CASE("lattice_distance") {
  const TorusParams t(1.0);
  CHECK(lattice_distance(cplx(0.0, 0.0), t) == doctest::Approx(0.0));
  CHECK(lattice_distance(cplx(0.5, 0.5), t) == doctest::Approx(std::sqrt(0.5)));
  CHECK(lattice_distance(cplx(3.1, 1.0), t) == doctest::Approx(0.1));
}
