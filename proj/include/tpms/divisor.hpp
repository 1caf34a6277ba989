#pragma once

#include <vector>

#include "tpms/rational.hpp"
#include "tpms/theta.hpp"

namespace tpms {

enum class Edge { Lower, Upper };

/// One pre-vertex on a strip edge: its real part in [0,1) and its exponent.
struct Prevertex {
  double x;
  Rational exponent;
};

/// Pre-vertices p_i on the real edge and q_j on the edge Im z = d/2 of the
/// strip, with their exponents. Points live in the fundamental interval (0,1);
/// periodic images are generated by callers, never stored.
class DivisorSpec {
 public:
  DivisorSpec(TorusParams torus, std::vector<Prevertex> lower, std::vector<Prevertex> upper);

  const TorusParams& torus() const { return torus_; }
  const std::vector<Prevertex>& lower() const { return lower_; }
  const std::vector<Prevertex>& upper() const { return upper_; }
  const std::vector<Prevertex>& edge(Edge e) const { return e == Edge::Lower ? lower_ : upper_; }

  /// Complex position of the i-th pre-vertex of an edge.
  cplx point(Edge e, std::size_t i) const;

  /// Real point on the lower edge where the Gauss map is normalized to be real
  /// and positive and where the surface is pinned to the origin. 0 when 0 is
  /// not a pre-vertex of either edge (always true for symmetric specs).
  double base_point() const { return base_; }

  /// Interior angle pi (a + 1) of the periodic polygon at a pre-vertex.
  double interior_angle(Edge e, std::size_t i) const;

 private:
  TorusParams torus_;
  std::vector<Prevertex> lower_;
  std::vector<Prevertex> upper_;
  double base_ = 0.0;
};

/// Half data of a divisor symmetric about the imaginary axis: points in
/// (0, 1/2); expansion adds the mirrored point 1 - x with negated exponent.
class SymmetricDivisorSpec {
 public:
  SymmetricDivisorSpec(TorusParams torus, std::vector<Prevertex> lower, std::vector<Prevertex> upper);

  const TorusParams& torus() const { return torus_; }
  const std::vector<Prevertex>& lower() const { return lower_; }
  const std::vector<Prevertex>& upper() const { return upper_; }

  SymmetricDivisorSpec with_torus(const TorusParams& t) const { return {t, lower_, upper_}; }

 private:
  TorusParams torus_;
  std::vector<Prevertex> lower_;
  std::vector<Prevertex> upper_;
};

/// Mirrors every half point x to 1 - x (i.e. -x mod 1) with negated exponent.
/// Throws OverlappingPoints if a mirror image collides with a half point.
DivisorSpec expand(const SymmetricDivisorSpec& s);

/// Inverse of expand. Throws InvalidArgument if the divisor is not mirror
/// symmetric with opposite exponents.
SymmetricDivisorSpec restrict_symmetric(const DivisorSpec& d);

/// Signed angle pi a (2p - 1) between the plane over [-p, p] and the plane of
/// the opposite boundary, for the two-point divisor.
double plane_angle_basic(double a, double p);

/// Signed angle pi (sum a_i (2 p_i - 1) + sum b_j (2 Re q_j - 1)) between the
/// planes over [-p_1, p_1] and [-q_1, q_1].
double plane_angle_general(const SymmetricDivisorSpec& s);

/// p = (rs - r - s) / (2 (r - 1) s) for the two-point divisor with corner
/// angle pi/r and bottom angle pi/s. Throws OutOfRange unless 0 < p <= 1/2.
Rational basic_p(int r, int s);

}  // namespace tpms
