#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "tpms/divisor.hpp"
#include "tpms/quadrature.hpp"
#include "tpms/theta.hpp"

namespace tpms {

/// A waypoint that coincides with the periodic image point(edge, index) + shift.
struct Anchor {
  Edge edge;
  std::size_t index;
  int shift;
};

/// Per-path accumulator of the continuous argument of every theta factor.
/// Not shareable between paths.
struct BranchState {
  std::vector<double> args;
  bool started = false;
};

/// G(z) = e^{i phi} prod theta(z - p_i)^{a_i} prod theta(z - q_j)^{b_j}.
///
/// Powers use the holomorphic branch of log theta on the closed strip, so G is
/// single valued there; phi makes G real and positive at the divisor's base
/// point. Along the lower edge G then has constant argument on every interval
/// between pre-vertices and turns by -pi a_i when passing p_i to the right.
class GaussMap {
 public:
  explicit GaussMap(DivisorSpec divisor);

  const DivisorSpec& divisor() const { return divisor_; }
  const TorusParams& torus() const { return divisor_.torus(); }
  double phase() const { return phase_; }
  double exclusion() const { return exclusion_; }
  void set_exclusion(double r) { exclusion_ = r; }

  /// log G on the closed strip. Throws PoleProximity within the exclusion
  /// radius of a pre-vertex.
  cplx log_value(cplx z) const;
  /// log G at anchor + delta, evaluating the anchored factor from the exact
  /// offset `delta`; no proximity check for that factor.
  cplx log_value(const Anchor& anchor, cplx delta) const;
  cplx operator()(cplx z) const { return std::exp(log_value(z)); }

  /// G with every factor's argument continued from the previous call on the
  /// same state. The first call seeds the arguments from the strip branch, so
  /// inside the strip tracked and untracked values agree.
  cplx tracked(cplx z, BranchState& state) const;

  /// Exponent of G at a pre-vertex: G ~ (z - point)^exponent.
  double exponent(const Anchor& a) const { return divisor_.edge(a.edge)[a.index].exponent.to_double(); }

  /// Finds a pre-vertex image within `tol` of z (on either edge).
  std::optional<Anchor> anchor_at(cplx z, double tol = 1e-12) const;
  cplx anchor_point(const Anchor& a) const;

 private:
  cplx raw_log(cplx z, const Anchor* anchor, cplx delta) const;

  DivisorSpec divisor_;
  double phase_ = 0.0;
  double exclusion_ = kDefaultPoleExclusion;
};

/// Waypoints inside the closed strip; waypoints that coincide with pre-vertex
/// images carry an anchor so the integrator treats them as singular endpoints.
struct StripPath {
  std::vector<cplx> waypoints;
  std::vector<std::optional<Anchor>> anchors;

  /// Builds a path through the given waypoints, snapping and anchoring
  /// waypoints that lie on pre-vertex images. Throws PoleProximity if a segment
  /// interior passes within the exclusion radius of a pre-vertex, and
  /// InvalidArgument for repeated waypoints or points outside the strip.
  static StripPath through(const GaussMap& g, std::vector<cplx> waypoints);

  /// base -> base + i Im z -> z, broken at every pre-vertex image when the
  /// horizontal leg runs along a strip edge.
  static StripPath canonical(const GaussMap& g, cplx z);
};

enum class IntegrandMode { G, InverseG };

/// Phi1 = int G dz and Phi2 = int 1/G dz along the same path.
struct PhiPair {
  cplx phi1{};
  cplx phi2{};
  PhiPair& operator+=(const PhiPair& o) {
    phi1 += o.phi1;
    phi2 += o.phi2;
    return *this;
  }
  friend PhiPair operator+(PhiPair a, const PhiPair& b) { return a += b; }
  friend PhiPair operator-(PhiPair a, const PhiPair& b) { return {a.phi1 - b.phi1, a.phi2 - b.phi2}; }
  cplx get(IntegrandMode m) const { return m == IntegrandMode::G ? phi1 : phi2; }
};

/// Integrates G dz and dz/G over one straight segment; anchored endpoints are
/// treated as algebraic singularities of exponent +a / -a.
PhiPair integrate_segment(const GaussMap& g, cplx a, const std::optional<Anchor>& anchor_a, cplx b,
                          const std::optional<Anchor>& anchor_b, const QuadratureOptions& opt = {});

PhiPair integrate_path(const GaussMap& g, const StripPath& path, const QuadratureOptions& opt = {});

cplx sc_integrate(const GaussMap& g, const StripPath& path, IntegrandMode mode, const QuadratureOptions& opt = {});

/// Memo of Phi values at edge waypoints (pre-vertex images and the top of the
/// base column), keyed by the waypoint position. Per caller; not thread-safe.
class IntegralCache {
 public:
  explicit IntegralCache(QuadratureOptions opt = {}) : opt_(opt) {}
  const QuadratureOptions& options() const { return opt_; }

  /// Phi (relative to the base point) at z, integrated along the canonical path
  /// and reusing cached edge waypoints.
  PhiPair at(const GaussMap& g, cplx z);

  std::size_t size() const { return memo_.size(); }

 private:
  struct Key {
    double re, im;
    bool operator<(const Key& o) const { return re < o.re || (re == o.re && im < o.im); }
  };
  QuadratureOptions opt_;
  std::map<Key, PhiPair> memo_;
};

/// Image of one boundary edge of the strip under Phi1 (or Phi2).
struct PolygonImage {
  std::vector<cplx> vertices;          // images of consecutive pre-vertices
  std::vector<cplx> edge_directions;   // unit vectors between consecutive vertices
  std::vector<double> interior_angles; // at interior vertices (first/last omitted)
  cplx translation{};                  // v with Phi(z+1) = Phi(z) + v
};

PolygonImage polygon_image(const GaussMap& g, Edge edge, int periods, IntegrandMode mode = IntegrandMode::G,
                           const QuadratureOptions& opt = {});

/// CSV dump "index,x,y" of the polygon vertices.
void write_polygon_csv(std::ostream& os, const PolygonImage& poly);

}  // namespace tpms
