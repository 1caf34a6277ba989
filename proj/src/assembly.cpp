#include "tpms/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <tuple>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "tpms/error.hpp"

namespace tpms {

// --- group elements ---

Vec3 GroupElement::apply(const Vec3& x) const {
  const Vec2 h = Q * Vec2(x[0], x[1]) + t;
  return {h[0], h[1], (flip ? -x[2] : x[2]) + shift};
}

GroupElement GroupElement::then(const GroupElement& next) const {
  GroupElement out;
  out.Q = next.Q * Q;
  out.t = next.Q * t + next.t;
  out.flip = flip != next.flip;
  out.shift = (next.flip ? -shift : shift) + next.shift;
  return out;
}

bool GroupElement::is_translation() const { return !flip && (Q - Mat2::Identity()).norm() < 1e-9; }

GroupElement GroupElement::reflection(const Line2& l) {
  GroupElement g;
  g.Q = Mat2::Identity() - 2.0 * l.n * l.n.transpose();
  g.t = 2.0 * l.c * l.n;
  return g;
}

GroupElement GroupElement::horizontal_mirror(double height) {
  GroupElement g;
  g.flip = true;
  g.shift = 2.0 * height;
  return g;
}

namespace {

Line2 line_through(const Vec2& a, const Vec2& b) {
  const Vec2 d = (b - a).normalized();
  const Vec2 n(-d[1], d[0]);
  return {n, n.dot(a)};
}

double angle_at(const Vec2& v, const Vec2& a, const Vec2& b) {
  const Vec2 x = (a - v).normalized(), y = (b - v).normalized();
  return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
}

}  // namespace

TriangleGroup TriangleGroup::make(const Triple& rst, double side01) {
  if (!is_euclidean(rst)) throw Error(ErrorKind::InvalidTriple, rst.str() + " is not a euclidean triangle group");
  if (!(side01 > 0.0)) throw Error(ErrorKind::InvalidArgument, "triangle side must be positive");
  TriangleGroup g;
  g.rst = rst;
  g.angles = {kPi / rst.r, kPi / rst.s, kPi / rst.t};
  const double side02 = side01 * std::sin(g.angles[1]) / std::sin(g.angles[2]);
  g.v = {Vec2(0.0, 0.0), Vec2(side01, 0.0), side02 * Vec2(std::cos(g.angles[0]), std::sin(g.angles[0]))};
  for (int k = 0; k < 3; ++k) g.lines[k] = line_through(g.v[(k + 1) % 3], g.v[(k + 2) % 3]);
  return g;
}

namespace {

std::array<Vec3, 3> probes(double scale) {
  return {Vec3(0.3137, 0.1729, 0.2311) * scale, Vec3(-0.4111, 0.5303, 0.7129) * scale,
          Vec3(0.1213, -0.3719, -0.1931) * scale};
}

bool same_element(const GroupElement& a, const GroupElement& b, const std::array<Vec3, 3>& pr, double tol) {
  for (const auto& x : pr)
    if ((a.apply(x) - b.apply(x)).norm() > tol) return false;
  return true;
}

}  // namespace

std::vector<GroupElement> TriangleGroup::elements(int depth, bool horizontal_mirror) const {
  std::vector<GroupElement> gens;
  for (const auto& l : lines) gens.push_back(GroupElement::reflection(l));
  if (horizontal_mirror) gens.push_back(GroupElement::horizontal_mirror(0.5));
  const double scale = (v[1] - v[0]).norm();
  const auto pr = probes(scale);
  std::vector<GroupElement> all{GroupElement{}};
  std::vector<GroupElement> frontier = all;
  for (int d = 0; d < depth; ++d) {
    std::vector<GroupElement> next;
    for (const auto& e : frontier) {
      for (const auto& gen : gens) {
        const GroupElement c = e.then(gen);
        bool seen = false;
        for (const auto& a : all) {
          if (same_element(a, c, pr, 1e-9 * std::max(1.0, scale))) {
            seen = true;
            break;
          }
        }
        if (!seen) {
          all.push_back(c);
          next.push_back(c);
        }
      }
    }
    frontier = std::move(next);
  }
  return all;
}

// --- patch lines and alignment ---

std::vector<PatchLine> patch_lines(const SurfacePatch& p, double offset_tol) {
  std::vector<PatchLine> out;
  for (const auto& label : p.labels()) {
    const VerticalPlane pl = plane_of(p, label);
    Line2 l{pl.n, pl.offset};
    bool merged = false;
    for (auto& ex : out) {
      const double dot = ex.line.n.dot(l.n);
      if (std::abs(dot) < 1.0 - 1e-9) continue;
      const double c = dot > 0.0 ? l.c : -l.c;
      if (std::abs(c - ex.line.c) < offset_tol) {
        ex.labels.push_back(label);
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back({l, {label}});
  }
  return out;
}

MeasuredTriangle measure_triangle(const SurfacePatch& p) {
  const auto lines = patch_lines(p);
  if (lines.size() != 3) {
    std::string msg = "patch has " + std::to_string(lines.size()) + " distinct boundary planes, expected 3";
    if (lines.size() > 3) msg += " (period not closed)";
    throw Error(ErrorKind::AngleMismatch, msg);
  }
  MeasuredTriangle m;
  for (int k = 0; k < 3; ++k) m.sides[k] = lines[k];
  for (int k = 0; k < 3; ++k) {
    const Line2& a = lines[(k + 1) % 3].line;
    const Line2& b = lines[(k + 2) % 3].line;
    Mat2 A;
    A << a.n[0], a.n[1], b.n[0], b.n[1];
    if (std::abs(A.determinant()) < 1e-9) throw Error(ErrorKind::AngleMismatch, "parallel boundary planes");
    m.v[k] = A.inverse() * Vec2(a.c, b.c);
  }
  for (int k = 0; k < 3; ++k) m.angles[k] = angle_at(m.v[k], m.v[(k + 1) % 3], m.v[(k + 2) % 3]);
  return m;
}

namespace {

// Permutation s with measured angle at s[k] matching group angle k.
std::optional<std::array<int, 3>> match_angles(const std::array<double, 3>& measured,
                                               const std::array<double, 3>& target, double tol) {
  std::array<int, 3> s{0, 1, 2};
  do {
    bool ok = true;
    for (int k = 0; k < 3; ++k) ok = ok && std::abs(measured[s[k]] - target[k]) <= tol;
    if (ok) return s;
  } while (std::next_permutation(s.begin(), s.end()));
  return std::nullopt;
}

std::string angle_text(const std::array<double, 3>& a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(pi/%.6g, pi/%.6g, pi/%.6g)", kPi / a[0], kPi / a[1], kPi / a[2]);
  return buf;
}

}  // namespace

TriangleGroup group_for_patch(const SurfacePatch& p, const Triple& rst) {
  const MeasuredTriangle m = measure_triangle(p);
  const std::array<double, 3> target{kPi / rst.r, kPi / rst.s, kPi / rst.t};
  const auto s = match_angles(m.angles, target, 1e-5);
  if (!s)
    throw Error(ErrorKind::AngleMismatch,
                "measured triangle angles " + angle_text(m.angles) + " vs expected " + angle_text(target));
  return TriangleGroup::make(rst, (m.v[(*s)[1]] - m.v[(*s)[0]]).norm());
}

SurfacePatch align_patch(const SurfacePatch& p, const TriangleGroup& g, double tol) {
  const MeasuredTriangle m = measure_triangle(p);
  const auto s = match_angles(m.angles, g.angles, tol);
  if (!s)
    throw Error(ErrorKind::AngleMismatch,
                "measured triangle angles " + angle_text(m.angles) + " vs expected " + angle_text(g.angles));
  const double scale = (g.v[1] - g.v[0]).norm();
  for (int k = 0; k < 3; ++k) {
    const double lm = (m.v[(*s)[(k + 1) % 3]] - m.v[(*s)[k]]).norm();
    const double lg = (g.v[(k + 1) % 3] - g.v[k]).norm();
    if (std::abs(lm - lg) > tol * scale)
      throw Error(ErrorKind::AngleMismatch, "triangle side lengths differ from the group's");
  }
  Mat2 P, G;
  P.col(0) = m.v[(*s)[1]] - m.v[(*s)[0]];
  P.col(1) = m.v[(*s)[2]] - m.v[(*s)[0]];
  G.col(0) = g.v[1] - g.v[0];
  G.col(1) = g.v[2] - g.v[0];
  Mat2 Q = G * P.inverse();
  // project onto the orthogonal group
  Eigen::JacobiSVD<Mat2> svd(Q, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Q = svd.matrixU() * svd.matrixV().transpose();
  const Vec2 t = g.v[0] - Q * m.v[(*s)[0]];
  SurfacePatch out = p;
  Mat3 M = Mat3::Identity();
  M.topLeftCorner<2, 2>() = Q;
  out.R = M * p.R;
  out.T = M * p.T + Vec3(t[0], t[1], 0.0);
  return out;
}

double seam_gap(const SurfacePatch& a, const TriangleGroup& g) {
  double worst = 0.0;
  for (int j : {0, a.nv() - 1}) {
    for (int i = 0; i < a.nu(); ++i) {
      const Vec3 x = a.point(i, j);
      double d = 1e300;
      for (const auto& l : g.lines) d = std::min(d, l.distance(Vec2(x[0], x[1])));
      worst = std::max(worst, 2.0 * d);
    }
  }
  return worst;
}

// --- lattice ---

std::array<Vec2, 2> translation_lattice(const std::vector<GroupElement>& elems) {
  std::vector<Vec2> diffs;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      const auto& a = elems[i];
      const auto& b = elems[k];
      if (a.flip != b.flip || (a.Q - b.Q).norm() > 1e-9) continue;
      const Vec2 d = a.t - b.t;
      if (d.norm() > 1e-9) diffs.push_back(d);
    }
  }
  if (diffs.empty()) throw Error(ErrorKind::InvalidArgument, "no translations among the group elements");
  std::sort(diffs.begin(), diffs.end(), [](const Vec2& x, const Vec2& y) { return x.norm() < y.norm(); });
  Vec2 b1 = diffs[0], b2 = Vec2::Zero();
  for (const auto& d : diffs) {
    if (std::abs(b1[0] * d[1] - b1[1] * d[0]) > 1e-9 * b1.norm() * d.norm()) {
      b2 = d;
      break;
    }
  }
  if (b2.norm() == 0.0) throw Error(ErrorKind::InvalidArgument, "translations span only one direction; raise depth");
  // Lagrange-Gauss reduction
  for (int it = 0; it < 64; ++it) {
    if (b2.squaredNorm() < b1.squaredNorm()) std::swap(b1, b2);
    const double mu = std::round(b1.dot(b2) / b1.squaredNorm());
    if (mu == 0.0) break;
    b2 -= mu * b1;
  }
  if (b2.squaredNorm() < b1.squaredNorm()) std::swap(b1, b2);
  return {b1, b2};
}

// --- mesh ---

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey& o) const { return x == o.x && y == o.y && z == o.z; }
};
struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return static_cast<std::size_t>(k.x * 73856093LL ^ k.y * 19349663LL ^ k.z * 83492791LL);
  }
};

class Welder {
 public:
  explicit Welder(double tol) : tol_(tol), cell_(std::max(tol * 16.0, 1e-6)) {}
  std::uint32_t add(const Vec3& x, std::vector<Vec3>& verts) {
    const CellKey c = key(x);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = map_.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == map_.end()) continue;
          for (std::uint32_t id : it->second)
            if ((verts[id] - x).norm() <= tol_) return id;
        }
    const auto id = static_cast<std::uint32_t>(verts.size());
    verts.push_back(x);
    map_[c].push_back(id);
    return id;
  }

 private:
  CellKey key(const Vec3& x) const {
    return {static_cast<std::int64_t>(std::floor(x[0] / cell_)), static_cast<std::int64_t>(std::floor(x[1] / cell_)),
            static_cast<std::int64_t>(std::floor(x[2] / cell_))};
  }
  double tol_, cell_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> map_;
};

double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * (b - a).cross(c - a).norm(); }

std::vector<std::array<std::size_t, 3>> quad_faces(const SurfacePatch& p, const std::vector<Vec3>& pts) {
  std::vector<std::array<std::size_t, 3>> faces;
  for (int j = 0; j + 1 < p.nv(); ++j) {
    for (int i = 0; i + 1 < p.nu(); ++i) {
      const std::size_t a = p.index(i, j), b = p.index(i + 1, j), c = p.index(i + 1, j + 1), d = p.index(i, j + 1);
      if ((pts[a] - pts[c]).norm() <= (pts[b] - pts[d]).norm()) {
        faces.push_back({a, b, c});
        faces.push_back({a, c, d});
      } else {
        faces.push_back({a, b, d});
        faces.push_back({b, c, d});
      }
    }
  }
  return faces;
}

}  // namespace

TriplyPeriodicMesh replicate(const SurfacePatch& p, const TriangleGroup& g, int depth, bool use_horizontal_mirror,
                             const ReplicateOptions& opt) {
  TriplyPeriodicMesh mesh;
  mesh.horizontal_mirror = use_horizontal_mirror;
  mesh.copies = g.elements(depth, use_horizontal_mirror);
  const std::vector<Vec3> base = p.points();

  // quad split pattern, shared by all copies (isometries keep lengths)
  const auto faces = quad_faces(p, base);

  const std::size_t nc = mesh.copies.size();
  std::vector<std::vector<Vec3>> moved(nc);
  const int nci = static_cast<int>(nc);
#pragma omp parallel for schedule(static) if (opt.parallel)
  for (int c = 0; c < nci; ++c) {
    moved[c].resize(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) moved[c][k] = mesh.copies[c].apply(base[k]);
  }

  Welder welder(opt.weld_tol);
  for (std::size_t c = 0; c < nc; ++c) {
    std::vector<std::uint32_t> ids(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) ids[k] = welder.add(moved[c][k], mesh.vertices);
    const bool rev = mesh.copies[c].reverses_orientation();
    for (const auto& f : faces) {
      std::array<std::uint32_t, 3> t{ids[f[0]], ids[f[1]], ids[f[2]]};
      if (rev) std::swap(t[1], t[2]);
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
      if (tri_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) <= 1e-14) continue;
      mesh.triangles.push_back(t);
      mesh.copy_of_triangle.push_back(static_cast<std::uint32_t>(c));
    }
  }

  const auto lat = translation_lattice(g.elements(std::max(depth, 4)));
  mesh.vertical_period = 1.0;
  mesh.doubled_vertical_period = 2.0;
  mesh.lattice = {Vec3(lat[0][0], lat[0][1], 0.0), Vec3(lat[1][0], lat[1][1], 0.0), Vec3(0.0, 0.0, 1.0)};
  return mesh;
}

TriplyPeriodicMesh patch_mesh(const SurfacePatch& p) {
  TriplyPeriodicMesh mesh;
  mesh.copies = {GroupElement{}};
  mesh.vertices = p.points();
  for (const auto& f : quad_faces(p, mesh.vertices)) {
    const Vec3 &a = mesh.vertices[f[0]], &b = mesh.vertices[f[1]], &c = mesh.vertices[f[2]];
    if (tri_area(a, b, c) <= 1e-14) continue;
    mesh.triangles.push_back({static_cast<std::uint32_t>(f[0]), static_cast<std::uint32_t>(f[1]),
                              static_cast<std::uint32_t>(f[2])});
    mesh.copy_of_triangle.push_back(0);
  }
  mesh.lattice = {Vec3::Zero(), Vec3::Zero(), Vec3(0.0, 0.0, 1.0)};
  return mesh;
}

MeshTopology mesh_topology(const TriplyPeriodicMesh& m) {
  std::unordered_map<std::uint64_t, int> count;
  MeshTopology topo;
  for (const auto& t : m.triangles) {
    if (tri_area(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]) <= 1e-14) ++topo.degenerate_faces;
    for (int e = 0; e < 3; ++e) {
      std::uint64_t a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      ++count[(a << 32) | b];
    }
  }
  for (const auto& [k, c] : count) {
    if (c == 1) ++topo.boundary_edges;
    else if (c == 2) ++topo.manifold_edges;
    else ++topo.singular_edges;
  }
  return topo;
}

double lattice_invariance_error(const TriplyPeriodicMesh& m, int samples) {
  if (m.copies.empty() || m.triangles.empty()) return 0.0;
  std::vector<std::vector<std::uint32_t>> verts_of(m.copies.size());
  {
    std::vector<char> taken(m.vertices.size(), 0);
    for (std::size_t k = 0; k < m.triangles.size(); ++k)
      for (auto v : m.triangles[k])
        if (!taken[v]) {
          taken[v] = 1;
          verts_of[m.copy_of_triangle[k]].push_back(v);
        }
  }
  Vec3 lo = m.vertices[0], hi = m.vertices[0];
  for (const auto& v : m.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const auto pr = probes((hi - lo).norm());
  double worst = 0.0;
  int used = 0;
  for (int l = 0; l < 2 && used < samples; ++l) {
    for (int sign : {-1, 1}) {
      GroupElement shift;
      shift.t = sign * Vec2(m.lattice[l][0], m.lattice[l][1]);
      for (std::size_t c = 0; c < m.copies.size() && used < samples; ++c) {
        // only copies whose translate was generated too
        const GroupElement moved = m.copies[c].then(shift);
        bool present = false;
        for (const auto& e : m.copies) present = present || same_element(e, moved, pr, 1e-9 * (hi - lo).norm());
        if (!present || verts_of[c].empty()) continue;
        const std::uint32_t v = verts_of[c][(c * 7919) % verts_of[c].size()];
        const Vec3 y = m.vertices[v] + Vec3(shift.t[0], shift.t[1], 0.0);
        double best = 1e300;
        for (const auto& w : m.vertices) best = std::min(best, (w - y).squaredNorm());
        worst = std::max(worst, std::sqrt(best));
        ++used;
      }
    }
  }
  if (used == 0) throw Error(ErrorKind::InvalidArgument, "no copy has its lattice translate in the mesh; raise depth");
  return worst;
}

// --- triangle intersection ---

namespace {

void project(const Tri& t, const Vec3& axis, double& lo, double& hi) {
  lo = hi = axis.dot(t[0]);
  for (int k = 1; k < 3; ++k) {
    const double v = axis.dot(t[k]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
}

}  // namespace

bool triangles_intersect(const Tri& a, const Tri& b, double eps) {
  std::array<Vec3, 3> ea{a[1] - a[0], a[2] - a[1], a[0] - a[2]};
  std::array<Vec3, 3> eb{b[1] - b[0], b[2] - b[1], b[0] - b[2]};
  const Vec3 na = ea[0].cross(ea[1]), nb = eb[0].cross(eb[1]);
  // coplanar pair: normals and edge crosses are all normal to the plane
  const bool coplanar = na.cross(nb).norm() <= 1e-12 * na.norm() * nb.norm() &&
                        std::abs(na.dot(b[0] - a[0])) <= eps * na.norm();
  std::vector<Vec3> axes;
  if (!coplanar) {
    axes = {na, nb};
    for (const auto& x : ea)
      for (const auto& y : eb) axes.push_back(x.cross(y));
  }
  for (const auto& x : ea) axes.push_back(na.cross(x));
  for (const auto& y : eb) axes.push_back(nb.cross(y));
  for (const auto& ax : axes) {
    const double len = ax.norm();
    if (len < 1e-300) continue;
    const Vec3 u = ax / len;
    double a0, a1, b0, b1;
    project(a, u, a0, a1);
    project(b, u, b0, b1);
    if (a1 <= b0 + eps || b1 <= a0 + eps) return false;
  }
  return true;
}

namespace {

bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Tri& t, double eps) {
  const Vec3 d = q - p;
  const Vec3 e1 = t[1] - t[0], e2 = t[2] - t[0];
  const Vec3 h = d.cross(e2);
  const double det = e1.dot(h);
  if (std::abs(det) < 1e-300) return false;
  const double inv = 1.0 / det;
  const Vec3 s = p - t[0];
  const double u = inv * s.dot(h);
  if (u < eps || u > 1.0 - eps) return false;
  const Vec3 qv = s.cross(e1);
  const double v = inv * d.dot(qv);
  if (v < eps || u + v > 1.0 - eps) return false;
  const double w = inv * e2.dot(qv);
  return w > eps && w < 1.0 - eps;
}

}  // namespace

bool triangles_intersect_reference(const Tri& a, const Tri& b, double eps) {
  for (int k = 0; k < 3; ++k) {
    if (segment_hits_triangle(a[k], a[(k + 1) % 3], b, eps)) return true;
    if (segment_hits_triangle(b[k], b[(k + 1) % 3], a, eps)) return true;
  }
  return false;
}

SpotCheckReport self_intersection_spot_check(const TriplyPeriodicMesh& m, std::size_t samples, std::uint64_t seed,
                                             bool parallel) {
  SpotCheckReport rep;
  const std::size_t nt = m.triangles.size();
  if (nt < 2) return rep;
  auto tri = [&](std::size_t i) {
    const auto& t = m.triangles[i];
    return Tri{m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]};
  };
  auto shares_vertex = [&](std::size_t i, std::size_t k) {
    for (auto a : m.triangles[i])
      for (auto b : m.triangles[k])
        if (a == b) return true;
    return false;
  };
  std::vector<Vec3> lo(nt), hi(nt);
  double mean_size = 0.0;
  for (std::size_t i = 0; i < nt; ++i) {
    const Tri t = tri(i);
    lo[i] = t[0].cwiseMin(t[1]).cwiseMin(t[2]);
    hi[i] = t[0].cwiseMax(t[1]).cwiseMax(t[2]);
    mean_size += (hi[i] - lo[i]).maxCoeff();
  }
  mean_size /= static_cast<double>(nt);
  const double cell = std::max(2.0 * mean_size, 1e-9);

  // nearby candidate pairs via a uniform grid over bounding boxes
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> grid;
  for (std::size_t i = 0; i < nt; ++i) {
    const auto c0 = (lo[i] / cell).array().floor().cast<std::int64_t>();
    const auto c1 = (hi[i] / cell).array().floor().cast<std::int64_t>();
    for (auto x = c0[0]; x <= c1[0]; ++x)
      for (auto y = c0[1]; y <= c1[1]; ++y)
        for (auto z = c0[2]; z <= c1[2]; ++z) grid[{x, y, z}].push_back(static_cast<std::uint32_t>(i));
  }
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cand;
  std::vector<CellKey> keys;
  for (const auto& kv : grid) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end(), [](const CellKey& a, const CellKey& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
  });
  for (const auto& key : keys) {
    const auto& ids = grid[key];
    for (std::size_t x = 0; x < ids.size(); ++x) {
      for (std::size_t y = x + 1; y < ids.size(); ++y) {
        std::uint32_t i = ids[x], k = ids[y];
        if (m.copy_of_triangle[i] == m.copy_of_triangle[k]) continue;
        if (i > k) std::swap(i, k);
        const std::uint64_t code = (static_cast<std::uint64_t>(i) << 32) | k;
        if (!seen.insert(code).second) continue;
        if (((hi[i] - lo[k]).array() < 0.0).any() || ((hi[k] - lo[i]).array() < 0.0).any()) continue;
        if (shares_vertex(i, k)) continue;
        cand.emplace_back(i, k);
      }
    }
  }
  rep.candidate_pairs = cand.size();
  std::mt19937_64 rng(seed);
  if (cand.size() > samples) {
    std::shuffle(cand.begin(), cand.end(), rng);
    cand.resize(samples);
  }
  std::uniform_int_distribution<std::size_t> pick(0, nt - 1);
  std::size_t guard = 0;
  while (cand.size() < samples && guard++ < 20 * samples) {
    const std::size_t i = pick(rng), k = pick(rng);
    if (i == k || m.copy_of_triangle[i] == m.copy_of_triangle[k] || shares_vertex(i, k)) continue;
    cand.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k));
  }
  rep.pairs_tested = cand.size();
  std::vector<char> hit(cand.size(), 0);
  const long long ncand = static_cast<long long>(cand.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (long long c = 0; c < ncand; ++c)
    hit[c] = triangles_intersect(tri(cand[c].first), tri(cand[c].second), 1e-12) ? 1 : 0;
  for (std::size_t c = 0; c < cand.size(); ++c) {
    if (!hit[c]) continue;
    ++rep.intersections;
    if (rep.examples.size() < 16) rep.examples.push_back(cand[c]);
  }
  return rep;
}

}  // namespace tpms
