#include "tpms/theta.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "tpms/error.hpp"

namespace tpms {

namespace {

constexpr double kCoeffFloor = 1e-300;

// expm1 for complex argument, accurate near 0.
cplx cexpm1(cplx x) {
  const double re = std::expm1(x.real()) * std::cos(x.imag()) - 2.0 * std::pow(std::sin(0.5 * x.imag()), 2);
  const double im = std::exp(x.real()) * std::sin(x.imag());
  return {re, im};
}

void require_finite(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorKind::InvalidArgument, "non-finite argument to theta");
}

}  // namespace

int series_terms(double d) {
  int n = 1;
  while (std::exp(-kPi * d * (n + 0.5) * (n + 0.5)) >= 1e-16) ++n;
  return n;
}

TorusParams::TorusParams(double d) : d_(d) {
  if (!std::isfinite(d) || d <= 0.0)
    throw Error(ErrorKind::InvalidArgument, "torus modulus d must be positive, got " + std::to_string(d));
  if (d < kMinStripHeight)
    throw Error(ErrorKind::DomainTooThin, "d = " + std::to_string(d) + " is below " + std::to_string(kMinStripHeight));
  nome_ = std::exp(-kPi * d);
  for (int k = 0;; ++k) {
    const double c = std::exp(-kPi * d * (k + 0.5) * (k + 0.5));
    if (c < kCoeffFloor) break;
    series_.push_back(k % 2 == 0 ? c : -c);
  }
  double log_pref = std::log(2.0) - 0.25 * kPi * d;
  for (int n = 1;; ++n) {
    const double c = std::exp(-2.0 * kPi * d * n);
    if (c < kCoeffFloor) break;
    product_.push_back(c);
    log_pref += std::log1p(-c);
  }
  log_prefactor_ = log_pref;
}

namespace {

// Shared driver: sums sum_k c_k * f_k(z) where f_k is sin or (2k+1) pi cos of
// (2k+1) pi z. Terms are generated from powers of exp(i pi z). The loop runs
// past the peak of |c_k e^{(2k+1) pi |y|}| and stops once the remaining term
// bound is negligible against the accumulated magnitude.
template <bool Derivative>
cplx theta_series(cplx z, const TorusParams& t) {
  require_finite(z);
  const double y = std::abs(z.imag());
  const cplx w = std::exp(cplx(0.0, kPi) * z);
  const cplx w2 = w * w;
  const cplx winv = 1.0 / w;
  const cplx winv2 = winv * winv;
  cplx wp = w;      // w^{2k+1}
  cplx wm = winv;   // w^{-(2k+1)}
  cplx sum = 0.0;
  double scale = 0.0;
  const auto& c = t.series_coeffs();
  const double peak = 2.0 * y / t.d();
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double odd = 2.0 * static_cast<double>(k) + 1.0;
    cplx term;
    if constexpr (Derivative) {
      term = c[k] * odd * kPi * 0.5 * (wp + wm);
    } else {
      term = c[k] * (wp - wm) / cplx(0.0, 2.0);
    }
    sum += term;
    const double bound = std::abs(c[k]) * std::exp(odd * kPi * y) * (Derivative ? odd * kPi : 1.0);
    scale += bound;
    if (static_cast<double>(k) + 0.5 > peak && bound < 1e-17 * scale) break;
    wp *= w2;
    wm *= winv2;
  }
  return 2.0 * sum;
}

}  // namespace

cplx theta(cplx z, const TorusParams& t) {
  // On the real axis the sine series is manifestly real.
  if (z.imag() == 0.0) {
    require_finite(z);
    double sum = 0.0;
    const auto& c = t.series_coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
      sum += c[k] * std::sin((2.0 * static_cast<double>(k) + 1.0) * kPi * z.real());
      if (std::abs(c[k]) < 1e-18) break;
    }
    return {2.0 * sum, 0.0};
  }
  return theta_series<false>(z, t);
}

cplx theta_prime(cplx z, const TorusParams& t) { return theta_series<true>(z, t); }

double lattice_distance(cplx z, const TorusParams& t) {
  const double dx = z.real() - std::round(z.real());
  const double dy = z.imag() - t.d() * std::round(z.imag() / t.d());
  return std::hypot(dx, dy);
}

cplx log_deriv(cplx z, const TorusParams& t, double exclusion) {
  require_finite(z);
  if (lattice_distance(z, t) < exclusion)
    throw Error(ErrorKind::PoleProximity, "log_deriv evaluated within exclusion radius of a lattice point");
  return theta_prime(z, t) / theta(z, t);
}

cplx log_theta(cplx w, const TorusParams& t, HalfStrip half) {
  require_finite(w);
  const cplx two_pi_i_w = cplx(0.0, 2.0 * kPi) * w;
  cplx sum{t.log_prefactor(), 0.0};
  if (half == HalfStrip::Upper) {
    // sin(pi w) = (i/2) e^{-i pi w} (1 - e^{2 pi i w}), |e^{2 pi i w}| <= 1
    sum += cplx(std::log(0.5), 0.5 * kPi) - 0.5 * two_pi_i_w + std::log(-cexpm1(two_pi_i_w));
  } else {
    // sin(pi w) = (1/(2i)) e^{i pi w} (1 - e^{-2 pi i w}), |e^{-2 pi i w}| <= 1
    sum += cplx(std::log(0.5), -0.5 * kPi) + 0.5 * two_pi_i_w + std::log(-cexpm1(-two_pi_i_w));
  }
  const cplx e_plus = std::exp(two_pi_i_w);
  const cplx e_minus = 1.0 / e_plus;
  for (const double c : t.product_coeffs()) {
    const cplx a = c * e_plus;
    const cplx b = c * e_minus;
    sum += std::log(1.0 - a) + std::log(1.0 - b);
    if (std::abs(a) + std::abs(b) < 1e-18) break;
  }
  return sum;
}

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DomainTooThin: return "DomainTooThin";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::OverlappingPoints: return "OverlappingPoints";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorKind::ConstraintInfeasible: return "ConstraintInfeasible";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::InvalidTriple: return "InvalidTriple";
    case ErrorKind::DegenerateEdge: return "DegenerateEdge";
    case ErrorKind::AngleMismatch: return "AngleMismatch";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

double ThetaIdentityErrors::max() const { return std::max({odd, shift_one, shift_tau, real_axis, log_deriv}); }

ThetaIdentityErrors theta_identity_errors(const TorusParams& t, int samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, 1.0), uy(-0.5 * t.d(), 0.5 * t.d());
  const cplx I(0.0, 1.0);
  ThetaIdentityErrors e;
  for (int k = 0; k < samples;) {
    const cplx z(ux(rng), uy(rng));
    if (lattice_distance(z, t) < 0.05) continue;
    ++k;
    const cplx th = theta(z, t);
    const cplx tt = theta(z + t.tau(), t);
    e.odd = std::max(e.odd, std::abs(theta(-z, t) + th) / std::abs(th));
    e.shift_one = std::max(e.shift_one, std::abs(theta(z + 1.0, t) + th) / std::abs(th));
    e.shift_tau = std::max(e.shift_tau, std::abs(tt + std::exp(-I * kPi * t.tau() - 2.0 * kPi * I * z) * th) / std::abs(tt));
    const cplx h = log_deriv(z, t), ht = log_deriv(z + t.tau(), t);
    e.log_deriv = std::max(e.log_deriv, std::abs(ht - h + 2.0 * kPi * I) / std::max(1.0, std::abs(h)));
    const double x = z.real();
    if (std::min(x, 1.0 - x) > 0.05) {
      const cplx tx = theta(cplx(x, 0.0), t);
      e.real_axis = std::max(e.real_axis, std::abs(tx.imag()) / std::abs(tx));
    }
  }
  return e;
}

}  // namespace tpms
