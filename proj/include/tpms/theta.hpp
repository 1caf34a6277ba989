#pragma once

// Jacobi theta function on rectangular tori C / <1, tau>, tau = i d.
//
//   theta(z) = sum_n exp(pi i (n+1/2)^2 tau + 2 pi i (n+1/2)(z - 1/2))
//            = 2 sum_{k>=0} (-1)^k q^{(k+1/2)^2} sin((2k+1) pi z),   q = exp(-pi d)
//
// theta is odd, real on the real axis, has simple zeroes on Z + tau Z and obeys
//   theta(z+1)   = -theta(z)
//   theta(z+tau) = -exp(-pi i tau - 2 pi i z) theta(z).
//
// Besides the series value this header exposes a holomorphic branch of
// log theta(w) on the half strips 0 <= Im w < d and -d < Im w <= 0, built from
// the Jacobi triple product. The Gauss map of a periodic polygon is a product
// of powers of theta factors, and that branch is what makes it single-valued on
// the closed parameter strip.

#include <complex>
#include <vector>

namespace tpms {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kMinStripHeight = 0.05;
inline constexpr double kDefaultPoleExclusion = 1e-6;

class TorusParams {
 public:
  /// Throws DomainTooThin for d < 0.05 and InvalidArgument for non-finite or
  /// non-positive d.
  explicit TorusParams(double d);

  double d() const { return d_; }
  cplx tau() const { return {0.0, d_}; }
  /// Height of the parameter strip Z = {0 < Im z < d/2}.
  double strip_height() const { return 0.5 * d_; }
  double nome() const { return nome_; }

  /// Series coefficients (-1)^k q^{(k+1/2)^2}, k = 0..N-1.
  const std::vector<double>& series_coeffs() const { return series_; }
  /// Product coefficients q^{2n}, n = 1..M.
  const std::vector<double>& product_coeffs() const { return product_; }
  /// log(2 q^{1/4} prod (1 - q^{2n})).
  double log_prefactor() const { return log_prefactor_; }

  friend bool operator==(const TorusParams& a, const TorusParams& b) { return a.d_ == b.d_; }

 private:
  double d_;
  double nome_;
  double log_prefactor_;
  std::vector<double> series_;
  std::vector<double> product_;
};

/// Number of series terms N for which exp(-pi d (N+1/2)^2) < 1e-16 (the
/// truncation used for evaluations near the real strip).
int series_terms(double d);

cplx theta(cplx z, const TorusParams& t);
cplx theta_prime(cplx z, const TorusParams& t);

/// theta'(z)/theta(z). Throws PoleProximity if z lies within `exclusion` of
/// the lattice Z + tau Z.
cplx log_deriv(cplx z, const TorusParams& t, double exclusion = kDefaultPoleExclusion);

/// Euclidean distance from z to the nearest lattice point of Z + tau Z.
double lattice_distance(cplx z, const TorusParams& t);

enum class HalfStrip { Upper, Lower };

/// Holomorphic branch of log theta(w) for w in the upper half strip
/// (0 <= Im w < d) or the lower one (-d < Im w <= 0). On the real axis the
/// upper branch is real for w in (0,1) and carries imaginary part pi for
/// w in (-1,0); the lower branch carries -pi there. Stepping w by +1 shifts
/// the upper branch by -i pi and the lower branch by +i pi.
cplx log_theta(cplx w, const TorusParams& t, HalfStrip half);

/// Max relative errors of the transformation laws over random points
/// z = x + iy, x in [0,1), |y| <= d/2, kept 0.05 away from the zeros.
struct ThetaIdentityErrors {
  double odd = 0.0;          // theta(-z) = -theta(z)
  double shift_one = 0.0;    // theta(z+1) = -theta(z)
  double shift_tau = 0.0;    // theta(z+tau) = -exp(-i pi tau - 2 pi i z) theta(z)
  double real_axis = 0.0;    // Im theta(x) = 0
  double log_deriv = 0.0;    // h(z+tau) = h(z) - 2 pi i
  double max() const;
};
ThetaIdentityErrors theta_identity_errors(const TorusParams& t, int samples, unsigned seed = 1);

}  // namespace tpms
