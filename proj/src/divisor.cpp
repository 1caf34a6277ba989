#include "tpms/divisor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tpms/error.hpp"

namespace tpms {

namespace {

constexpr double kPointTol = 1e-12;

void validate_edge(const std::vector<Prevertex>& pts, double hi, const char* which) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Prevertex& v = pts[i];
    if (!(v.x > 0.0 && v.x < hi))
      throw Error(ErrorKind::OutOfRange, std::string(which) + " point " + std::to_string(v.x) + " outside (0," +
                                             std::to_string(hi) + ")");
    if (!(abs(v.exponent) < Rational(1)))
      throw Error(ErrorKind::OutOfRange, std::string(which) + " exponent " + v.exponent.str() + " not in (-1,1)");
    if (i > 0 && !(v.x > pts[i - 1].x + kPointTol))
      throw Error(ErrorKind::OverlappingPoints, std::string(which) + " points must be strictly increasing");
  }
}

Rational exponent_sum(const std::vector<Prevertex>& pts) {
  Rational s(0);
  for (const auto& v : pts) s += v.exponent;
  return s;
}

bool near_any(double x, const std::vector<Prevertex>& pts) {
  for (const auto& v : pts) {
    double dx = std::abs(x - v.x);
    dx = std::min(dx, 1.0 - dx);
    if (dx < 1e-9) return true;
  }
  return false;
}

}  // namespace

DivisorSpec::DivisorSpec(TorusParams torus, std::vector<Prevertex> lower, std::vector<Prevertex> upper)
    : torus_(std::move(torus)), lower_(std::move(lower)), upper_(std::move(upper)) {
  validate_edge(lower_, 1.0, "lower");
  validate_edge(upper_, 1.0, "upper");
  if (!(exponent_sum(lower_) == Rational(0)) || !(exponent_sum(upper_) == Rational(0)))
    throw Error(ErrorKind::InvalidArgument, "angle condition violated: exponents must sum to zero on each edge");

  base_ = 0.0;
  if (near_any(0.0, lower_) || near_any(0.0, upper_)) {
    // midpoint of the widest gap among all real parts
    std::vector<double> xs;
    for (const auto& v : lower_) xs.push_back(v.x);
    for (const auto& v : upper_) xs.push_back(v.x);
    std::sort(xs.begin(), xs.end());
    double best = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double a = xs[i];
      const double b = i + 1 < xs.size() ? xs[i + 1] : xs[0] + 1.0;
      if (b - a > best) {
        best = b - a;
        base_ = 0.5 * (a + b);
      }
    }
    if (base_ >= 1.0) base_ -= 1.0;
  }
}

cplx DivisorSpec::point(Edge e, std::size_t i) const {
  const double x = edge(e)[i].x;
  return e == Edge::Lower ? cplx(x, 0.0) : cplx(x, torus_.strip_height());
}

double DivisorSpec::interior_angle(Edge e, std::size_t i) const {
  return kPi * (edge(e)[i].exponent.to_double() + 1.0);
}

SymmetricDivisorSpec::SymmetricDivisorSpec(TorusParams torus, std::vector<Prevertex> lower,
                                           std::vector<Prevertex> upper)
    : torus_(std::move(torus)), lower_(std::move(lower)), upper_(std::move(upper)) {
  validate_edge(lower_, 0.5 + kPointTol, "lower half");
  validate_edge(upper_, 0.5 + kPointTol, "upper half");
}

namespace {

std::vector<Prevertex> mirror(const std::vector<Prevertex>& half, const char* which) {
  std::vector<Prevertex> full;
  full.reserve(2 * half.size());
  for (const auto& v : half) full.push_back(v);
  for (const auto& v : half) {
    const double m = 1.0 - v.x;
    for (const auto& w : half) {
      if (std::abs(m - w.x) < 1e-9)
        throw Error(ErrorKind::OverlappingPoints,
                    std::string(which) + " point " + std::to_string(v.x) + " collides with its mirror image");
    }
    full.push_back({m, -v.exponent});
  }
  std::sort(full.begin(), full.end(), [](const Prevertex& a, const Prevertex& b) { return a.x < b.x; });
  return full;
}

std::vector<Prevertex> unmirror(const std::vector<Prevertex>& full) {
  std::vector<Prevertex> half;
  for (const auto& v : full) {
    if (v.x >= 0.5) continue;
    const auto it = std::find_if(full.begin(), full.end(),
                                 [&](const Prevertex& w) { return std::abs(w.x - (1.0 - v.x)) < 1e-12; });
    if (it == full.end() || !(it->exponent == -v.exponent))
      throw Error(ErrorKind::InvalidArgument, "divisor is not symmetric about the imaginary axis");
    half.push_back(v);
  }
  if (2 * half.size() != full.size())
    throw Error(ErrorKind::InvalidArgument, "divisor is not symmetric about the imaginary axis");
  return half;
}

}  // namespace

DivisorSpec expand(const SymmetricDivisorSpec& s) {
  return {s.torus(), mirror(s.lower(), "lower"), mirror(s.upper(), "upper")};
}

SymmetricDivisorSpec restrict_symmetric(const DivisorSpec& d) {
  return {d.torus(), unmirror(d.lower()), unmirror(d.upper())};
}

double plane_angle_basic(double a, double p) { return kPi * a * (2.0 * p - 1.0); }

double plane_angle_general(const SymmetricDivisorSpec& s) {
  double sum = 0.0;
  for (const auto& v : s.lower()) sum += v.exponent.to_double() * (2.0 * v.x - 1.0);
  for (const auto& v : s.upper()) sum += v.exponent.to_double() * (2.0 * v.x - 1.0);
  return kPi * sum;
}

Rational basic_p(int r, int s) {
  auto allowed = [](int v) { return v == 2 || v == 3 || v == 4 || v == 6; };
  if (!allowed(r) || !allowed(s))
    throw Error(ErrorKind::OutOfRange, "r and s must lie in {2,3,4,6}");
  const Rational p(static_cast<std::int64_t>(r) * s - r - s, 2 * static_cast<std::int64_t>(r - 1) * s);
  if (!(p > Rational(0)) || p > Rational(1, 2))
    throw Error(ErrorKind::OutOfRange, "p = " + p.str() + " for (r,s) = (" + std::to_string(r) + "," +
                                           std::to_string(s) + ") is outside (0,1/2]");
  return p;
}

}  // namespace tpms
