#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tpms/catalog.hpp"
#include "tpms/weierstrass.hpp"

namespace tpms {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Unoriented line {x : n . x = c} in the horizontal plane, |n| = 1.
struct Line2 {
  Vec2 n;
  double c;
  Vec2 reflect(const Vec2& x) const { return x - 2.0 * (n.dot(x) - c) * n; }
  double distance(const Vec2& x) const { return std::abs(n.dot(x) - c); }
};

/// Isometry of space that keeps the vertical direction: a planar isometry
/// x -> Q x + t on the horizontal part and x3 -> (flip ? -x3 : x3) + shift.
struct GroupElement {
  Mat2 Q = Mat2::Identity();
  Vec2 t = Vec2::Zero();
  bool flip = false;
  double shift = 0.0;

  Vec3 apply(const Vec3& x) const;
  GroupElement then(const GroupElement& next) const;  // next after this
  bool reverses_orientation() const { return (Q.determinant() < 0.0) != flip; }
  bool is_translation() const;
  static GroupElement reflection(const Line2& l);
  static GroupElement horizontal_mirror(double height);
};

/// Euclidean triangle with angles pi/r (at v[0]), pi/s (v[1]), pi/t (v[2]);
/// v[0] at the origin and v[1] on the positive x axis. lines[k] is the side
/// opposite v[k].
struct TriangleGroup {
  Triple rst;
  std::array<Vec2, 3> v;
  std::array<Line2, 3> lines;
  std::array<double, 3> angles;

  /// Triangle whose side v0 v1 has the given length.
  static TriangleGroup make(const Triple& rst, double side01);

  /// All distinct elements given by words of length <= depth in the three
  /// reflections (and the horizontal mirror at x3 = 1/2 when requested),
  /// identity first. Distinctness is decided on three probe points.
  std::vector<GroupElement> elements(int depth, bool horizontal_mirror = false) const;
};

/// Distinct boundary lines of a patch (planes that coincide merged), each
/// with the labels lying on it.
struct PatchLine {
  Line2 line;
  std::vector<std::string> labels;
};
std::vector<PatchLine> patch_lines(const SurfacePatch& p, double offset_tol = 1e-6);

/// Triangle spanned by the three boundary lines of a closed patch: the
/// vertices and interior angles. Throws AngleMismatch when the lines do not
/// reduce to three (open period) or are degenerate.
struct MeasuredTriangle {
  std::array<Vec2, 3> v;
  std::array<double, 3> angles;
  std::array<PatchLine, 3> sides;  // side k opposite v[k]
};
MeasuredTriangle measure_triangle(const SurfacePatch& p);

/// Builds the triangle group sized to the patch's triangle.
TriangleGroup group_for_patch(const SurfacePatch& p, const Triple& rst);

/// Rigid horizontal motion placing the patch's symmetry planes over the
/// group's triangle. Throws AngleMismatch if the measured angles or side
/// lengths differ from the group's by more than `tol`.
SurfacePatch align_patch(const SurfacePatch& p, const TriangleGroup& g, double tol = 1e-5);

/// Largest distance (times two, i.e. the gap to the reflected copy) of an
/// aligned patch's boundary nodes from the nearest group line.
double seam_gap(const SurfacePatch& aligned, const TriangleGroup& g);

struct TriplyPeriodicMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<std::uint32_t> copy_of_triangle;  // provenance per triangle
  std::vector<GroupElement> copies;
  std::array<Vec3, 3> lattice;  // two horizontal vectors and the vertical period
  double vertical_period = 1.0;
  double doubled_vertical_period = 2.0;  // with the horizontal mirror
  bool horizontal_mirror = false;
};

struct ReplicateOptions {
  double weld_tol = 1e-7;
  bool parallel = true;
};

/// Orbit of an aligned patch under words of length <= depth, welded into one
/// mesh. Quads are split along their shorter diagonal; copies produced by
/// orientation-reversing elements have their winding flipped.
TriplyPeriodicMesh replicate(const SurfacePatch& aligned, const TriangleGroup& g, int depth,
                             bool use_horizontal_mirror = false, const ReplicateOptions& opt = {});

/// The patch alone as a mesh (no replication, no welding); horizontal lattice
/// vectors are zero.
TriplyPeriodicMesh patch_mesh(const SurfacePatch& p);

/// Horizontal translation lattice of the group (reduced basis) from pairs of
/// elements with the same linear part.
std::array<Vec2, 2> translation_lattice(const std::vector<GroupElement>& elems);

struct MeshTopology {
  std::size_t boundary_edges = 0;   // valence 1
  std::size_t manifold_edges = 0;   // valence 2
  std::size_t singular_edges = 0;   // valence > 2
  std::size_t degenerate_faces = 0; // area <= 1e-14
};
MeshTopology mesh_topology(const TriplyPeriodicMesh& m);

/// Max distance from translated sample vertices to the nearest mesh vertex.
/// Samples come from copies whose lattice translate is itself a copy.
double lattice_invariance_error(const TriplyPeriodicMesh& m, int samples);

// --- triangle-triangle intersection ---

using Tri = std::array<Vec3, 3>;
/// Separating-axis test; triangles that only touch within `eps` do not count.
bool triangles_intersect(const Tri& a, const Tri& b, double eps = 1e-12);
/// Reference test: some edge of one triangle crosses the other triangle.
/// Misses coplanar overlaps.
bool triangles_intersect_reference(const Tri& a, const Tri& b, double eps = 1e-12);

struct SpotCheckReport {
  std::size_t pairs_tested = 0;
  std::size_t candidate_pairs = 0;  // nearby pairs from different copies
  std::size_t intersections = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> examples;
};
/// Tests pairs of triangles from different copies that share no vertex:
/// nearby pairs (overlapping bounding boxes) first, then random pairs, up to
/// `samples` in total. Deterministic for a given seed.
SpotCheckReport self_intersection_spot_check(const TriplyPeriodicMesh& m, std::size_t samples,
                                             std::uint64_t seed = 1, bool parallel = true);

}  // namespace tpms
