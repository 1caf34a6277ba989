#include <cmath>

#include "doctest.h"
#include "tpms/divisor.hpp"
#include "tpms/error.hpp"

using namespace tpms;

namespace {
ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}
}  // namespace

TEST_CASE("expand mirrors half points with negated exponents") {
  const TorusParams t(1.0);
  const SymmetricDivisorSpec s(t, {{0.25, Rational(1, 2)}}, {{0.1, Rational(-1, 3)}, {0.3, Rational(1, 3)}});
  const DivisorSpec d = expand(s);
  REQUIRE(d.lower().size() == 2);
  CHECK(d.lower()[0].x == 0.25);
  CHECK(d.lower()[1].x == doctest::Approx(0.75));
  CHECK(d.lower()[1].exponent == Rational(-1, 2));
  REQUIRE(d.upper().size() == 4);
  CHECK(d.upper()[3].x == doctest::Approx(0.9));
  CHECK(d.upper()[3].exponent == Rational(1, 3));
  CHECK(d.base_point() == 0.0);
  CHECK(d.point(Edge::Upper, 0) == cplx(0.1, 0.5));

  const SymmetricDivisorSpec back = restrict_symmetric(d);
  CHECK(back.lower().size() == 1);
  CHECK(back.upper()[1].x == 0.3);
}

TEST_CASE("divisor validation") {
  const TorusParams t(1.0);
  CHECK(kind_of([&] { DivisorSpec(t, {{0.2, Rational(1, 2)}}, {}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { DivisorSpec(t, {{0.2, Rational(1)}, {0.6, Rational(-1)}}, {}); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([&] { DivisorSpec(t, {{1.2, Rational(1, 2)}, {0.6, Rational(-1, 2)}}, {}); }) ==
        ErrorKind::OutOfRange);
  CHECK(kind_of([&] { DivisorSpec(t, {{0.6, Rational(1, 2)}, {0.2, Rational(-1, 2)}}, {}); }) ==
        ErrorKind::OverlappingPoints);
  CHECK(kind_of([&] { expand(SymmetricDivisorSpec(t, {{0.5, Rational(1, 2)}}, {})); }) ==
        ErrorKind::OverlappingPoints);
  CHECK(kind_of([&] { restrict_symmetric(DivisorSpec(t, {{0.2, Rational(1, 2)}, {0.7, Rational(-1, 2)}}, {})); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("base point avoids pre-vertices at 0") {
  const TorusParams t(1.0);
  const DivisorSpec d(t, {{0.3, Rational(1, 2)}, {1.0 - 1e-10, Rational(-1, 2)}}, {});
  CHECK(d.base_point() == doctest::Approx(0.65));
}

TEST_CASE("interior angle is pi (a + 1)") {
  const DivisorSpec d(TorusParams(1.0), {{0.25, Rational(-1, 2)}, {0.75, Rational(1, 2)}}, {});
  CHECK(d.interior_angle(Edge::Lower, 0) == doctest::Approx(kPi / 2));
  CHECK(d.interior_angle(Edge::Lower, 1) == doctest::Approx(3 * kPi / 2));
}

TEST_CASE("basic p formula") {
  CHECK(basic_p(2, 4) == Rational(1, 4));
  CHECK(basic_p(3, 3) == Rational(1, 4));
  CHECK(basic_p(6, 3) == Rational(3, 10));
  CHECK_THROWS_AS(basic_p(5, 3), Error);
  // the plane angle relation it solves: pi a (2p - 1) = -pi / s with a = (r-1)/r
  for (auto [r, s] : {std::pair{2, 4}, {3, 6}, {4, 2}, {6, 2}}) {
    const double a = (r - 1.0) / r;
    CHECK(plane_angle_basic(a, basic_p(r, s).to_double()) == doctest::Approx(-kPi / s));
  }
}

TEST_CASE("general plane angle sums both edges") {
  const SymmetricDivisorSpec s(TorusParams(1.0), {{0.2, Rational(1, 2)}}, {{0.3, Rational(-1, 4)}});
  CHECK(plane_angle_general(s) == doctest::Approx(kPi * (0.5 * (0.4 - 1.0) - 0.25 * (0.6 - 1.0))));
}
