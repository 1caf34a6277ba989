#pragma once

// Minimal surface patch over the parameter strip from Weierstrass data (G, dz):
//
//   X(z) = Re( c * W(z) ),   W = ( (Phi2 - Phi1)/2, i (Phi2 + Phi1)/2, z - base )
//
// with Phi1 = int G dz, Phi2 = int dz/G from the base point. c = 1 is the
// surface itself, c = -i its conjugate. A patch also carries a rigid motion
// (rotation + translation) so that aligned and reflected copies reuse the
// same sampled data.

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <string>
#include <vector>

#include "tpms/scmap.hpp"

namespace tpms {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Point of the surface (c = 1) at z, with the base point mapped to the origin.
Vec3 surface_point(cplx z, const GaussMap& g, IntegralCache& cache);

/// Horizontal projection F = X1 + i X2 = (conj Phi2 - Phi1)/2.
inline cplx horizontal_projection(const PhiPair& phi) { return 0.5 * (std::conj(phi.phi2) - phi.phi1); }

/// Unit normal from the Gauss map by inverse stereographic projection.
Vec3 normal_from_gauss(cplx G);

/// One maximal boundary interval between consecutive pre-vertices of an edge.
/// `label` is "L<k>" / "U<k>" where k is the index of the pre-vertex at the
/// left end of the interval (k = 0 .. m-1, the last one wrapping to the first
/// point + 1); an edge without pre-vertices has the single label "L" / "U".
struct BoundarySegment {
  std::string label;
  Edge edge;
  double x0, x1;  // parameter interval, x0 < x1, in the fundamental period
};

/// All boundary segments of a divisor, lower edge first.
std::vector<BoundarySegment> boundary_segments(const DivisorSpec& d);
/// Label of the segment containing the real part x (any period).
std::string segment_label(const DivisorSpec& d, Edge e, double x);

struct SurfacePatch {
  std::shared_ptr<const GaussMap> map;
  std::vector<double> us;  // column parameters Re z, increasing
  std::vector<double> vs;  // row parameters Im z, 0 .. d/2
  std::vector<std::array<cplx, 3>> W;  // row-major, index j * nu + i
  std::vector<Vec3> normals;           // of the c = 1 surface before the motion
  cplx c{1.0, 0.0};
  Mat3 R = Mat3::Identity();
  Vec3 T = Vec3::Zero();
  /// Per boundary node (row 0 and row nv-1) the segment label; corner nodes
  /// carry the labels of both neighbours separated by '|'.
  std::vector<std::string> lower_labels, upper_labels;
  std::vector<char> corner;  // per node

  int nu() const { return static_cast<int>(us.size()); }
  int nv() const { return static_cast<int>(vs.size()); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * us.size() + i; }
  cplx param(int i, int j) const { return {us[i], vs[j]}; }

  /// Raw point Re(c W) before the rigid motion.
  Vec3 local_point(int i, int j) const;
  Vec3 point(int i, int j) const { return R * local_point(i, j) + T; }
  Vec3 normal(int i, int j) const;
  std::vector<Vec3> points() const;

  /// Node indices (i, j) of a labelled boundary polyline, in parameter order,
  /// corners included. A segment that wraps around the window comes back as
  /// two runs.
  std::vector<std::vector<std::pair<int, int>>> boundary_runs(const std::string& label) const;
  std::vector<std::pair<int, int>> boundary_nodes(const std::string& label) const;
  std::vector<std::string> labels() const;
  /// True at nodes sitting on a pre-vertex.
  bool is_corner(int i, int j) const;
};

struct PatchOptions {
  QuadratureOptions quad{};
  bool parallel = true;  // OpenMP over rows; false runs the serial reference
};

/// Samples the fundamental piece over [base - 1/2, base + 1/2] x [0, d/2] with
/// about nu x nv nodes. Columns are uniform between consecutive breakpoints
/// (window ends, base, pre-vertex images of both edges) so every pre-vertex is
/// an exact node. Rows are integrated independently from the base column.
SurfacePatch make_patch(const GaussMap& g, int nu, int nv, const PatchOptions& opt = {});
SurfacePatch make_patch(std::shared_ptr<const GaussMap> g, int nu, int nv, const PatchOptions& opt = {});

/// Associate-family quarter turn: first two coordinates become Im int, the
/// third Im z. Applying it twice gives -X.
SurfacePatch conjugate_patch(const SurfacePatch& p);

/// Oriented vertical plane n . x = offset (n horizontal, unit) with n pointing
/// away from the surface.
struct VerticalPlane {
  Eigen::Vector2d n;
  double offset;
  double residual;  // max distance of the fitted boundary points
  std::string label;
};

/// Least-squares vertical plane through a labelled boundary polyline. Throws
/// DegenerateEdge for fewer than 3 distinct points.
VerticalPlane plane_of(const SurfacePatch& p, const std::string& label);

/// Angle of the wedge between two oriented vertical planes that contains the
/// surface, pi - angle(n1, n2).
double dihedral_angle(const VerticalPlane& a, const VerticalPlane& b);

/// Max distance of a labelled boundary polyline from its chord (for
/// conjugate patches, whose boundary consists of straight segments).
double straightness_defect(const SurfacePatch& p, const std::string& label);

// --- quality metrics on interior nodes ---

/// Interior nodes used by the finite-difference metrics: two neighbours on
/// each side at equal spacing and parameter distance >= `clearance` from every
/// pre-vertex image (where the map is singular).
std::vector<std::pair<int, int>> smooth_interior_nodes(const SurfacePatch& p, double clearance = 0.1);

struct PatchQuality {
  double harmonicity = 0.0;   // max |5-point Laplacian| / h^2 over the coordinates
  double conformality = 0.0;  // max of |E - G| / (E + G) and 2|F| / (E + G), 4th-order tangents
  double normal_angle = 0.0;  // max angle between grid and Gauss-map normals
  std::size_t nodes = 0;
};
PatchQuality patch_quality(const SurfacePatch& p, double clearance = 0.1);

/// Max |X(z + 1) - X(z) - (0, 0, 1)| over `samples` deterministic points.
double vertical_period_error(const GaussMap& g, int samples, const QuadratureOptions& quad = {});

}  // namespace tpms
