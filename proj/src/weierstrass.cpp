#include "tpms/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <set>

#include "tpms/error.hpp"

namespace tpms {

namespace {

constexpr double kNodeTol = 1e-12;

std::array<cplx, 3> w_from_phi(const PhiPair& phi, cplx z, double base) {
  const cplx i(0.0, 1.0);
  return {0.5 * (phi.phi2 - phi.phi1), 0.5 * i * (phi.phi2 + phi.phi1), z - base};
}

Vec3 corner_normal(const GaussMap& g, const Anchor& a) {
  // G -> 0 for positive exponents, G -> infinity for negative ones
  return g.exponent(a) > 0.0 ? Vec3(0.0, 0.0, -1.0) : Vec3(0.0, 0.0, 1.0);
}

}  // namespace

Vec3 normal_from_gauss(cplx G) {
  if (!std::isfinite(std::abs(G))) return {0.0, 0.0, 1.0};
  const double n2 = std::norm(G);
  return Vec3(2.0 * G.real(), 2.0 * G.imag(), n2 - 1.0) / (n2 + 1.0);
}

Vec3 surface_point(cplx z, const GaussMap& g, IntegralCache& cache) {
  const auto w = w_from_phi(cache.at(g, z), z, g.divisor().base_point());
  return {w[0].real(), w[1].real(), w[2].real()};
}

std::vector<BoundarySegment> boundary_segments(const DivisorSpec& d) {
  std::vector<BoundarySegment> out;
  for (Edge e : {Edge::Lower, Edge::Upper}) {
    const char tag = e == Edge::Lower ? 'L' : 'U';
    const auto& pts = d.edge(e);
    if (pts.empty()) {
      out.push_back({std::string(1, tag), e, 0.0, 1.0});
      continue;
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double x1 = k + 1 < pts.size() ? pts[k + 1].x : pts[0].x + 1.0;
      out.push_back({tag + std::to_string(k), e, pts[k].x, x1});
    }
  }
  return out;
}

std::string segment_label(const DivisorSpec& d, Edge e, double x) {
  const char tag = e == Edge::Lower ? 'L' : 'U';
  const auto& pts = d.edge(e);
  if (pts.empty()) return std::string(1, tag);
  double r = x - pts[0].x;
  r -= std::floor(r);
  const double y = pts[0].x + r;
  std::size_t k = 0;
  while (k + 1 < pts.size() && y >= pts[k + 1].x) ++k;
  return tag + std::to_string(k);
}

Vec3 SurfacePatch::local_point(int i, int j) const {
  const auto& w = W[index(i, j)];
  return {(c * w[0]).real(), (c * w[1]).real(), (c * w[2]).real()};
}

Vec3 SurfacePatch::normal(int i, int j) const { return R * normals[index(i, j)]; }

std::vector<Vec3> SurfacePatch::points() const {
  std::vector<Vec3> out(W.size());
  for (int j = 0; j < nv(); ++j)
    for (int i = 0; i < nu(); ++i) out[index(i, j)] = point(i, j);
  return out;
}

bool SurfacePatch::is_corner(int i, int j) const { return corner[index(i, j)] != 0; }

namespace {

bool has_label(const std::string& tags, const std::string& label) {
  std::size_t start = 0;
  while (start <= tags.size()) {
    const std::size_t bar = tags.find('|', start);
    const std::size_t end = bar == std::string::npos ? tags.size() : bar;
    if (tags.compare(start, end - start, label) == 0) return true;
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return false;
}

}  // namespace

std::vector<std::vector<std::pair<int, int>>> SurfacePatch::boundary_runs(const std::string& label) const {
  std::vector<std::vector<std::pair<int, int>>> runs;
  for (int row : {0, nv() - 1}) {
    const auto& tags = row == 0 ? lower_labels : upper_labels;
    std::vector<std::pair<int, int>> cur;
    for (int i = 0; i < nu(); ++i) {
      if (has_label(tags[i], label)) {
        cur.emplace_back(i, row);
      } else if (!cur.empty()) {
        runs.push_back(std::move(cur));
        cur.clear();
      }
    }
    if (!cur.empty()) runs.push_back(std::move(cur));
  }
  return runs;
}

std::vector<std::pair<int, int>> SurfacePatch::boundary_nodes(const std::string& label) const {
  std::vector<std::pair<int, int>> out;
  for (auto& r : boundary_runs(label)) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<std::string> SurfacePatch::labels() const {
  std::set<std::string> s;
  for (const auto* tags : {&lower_labels, &upper_labels})
    for (const auto& t : *tags)
      if (t.find('|') == std::string::npos) s.insert(t);
  return {s.begin(), s.end()};
}

namespace {

std::vector<double> column_params(const DivisorSpec& d, int nu) {
  const double b0 = d.base_point();
  const double lo = b0 - 0.5, hi = b0 + 0.5;
  std::vector<double> bp{lo, b0, hi};
  for (Edge e : {Edge::Lower, Edge::Upper}) {
    for (const auto& v : d.edge(e)) {
      for (int k = -2; k <= 2; ++k) {
        const double x = v.x + k;
        if (x > lo + kNodeTol && x < hi - kNodeTol) bp.push_back(x);
      }
    }
  }
  std::sort(bp.begin(), bp.end());
  std::vector<double> uniq;
  for (double x : bp)
    if (uniq.empty() || x - uniq.back() > kNodeTol) uniq.push_back(x);
  std::vector<double> us;
  const double per = static_cast<double>(nu - 1);
  for (std::size_t k = 0; k + 1 < uniq.size(); ++k) {
    const double a = uniq[k], b = uniq[k + 1];
    const int n = std::max(4, static_cast<int>(std::lround((b - a) * per)));
    for (int s = 0; s < n; ++s) us.push_back(s == 0 ? a : a + (b - a) * s / n);
  }
  us.push_back(uniq.back());
  return us;
}

}  // namespace

SurfacePatch make_patch(const GaussMap& g, int nu, int nv, const PatchOptions& opt) {
  return make_patch(std::make_shared<const GaussMap>(g), nu, nv, opt);
}

SurfacePatch make_patch(std::shared_ptr<const GaussMap> gp, int nu, int nv, const PatchOptions& opt) {
  if (nu < 8 || nv < 8) throw Error(ErrorKind::InvalidArgument, "patch resolution must be at least 8x8");
  const GaussMap& g = *gp;
  const DivisorSpec& d = g.divisor();
  const double h = d.torus().strip_height();
  const double b0 = d.base_point();

  SurfacePatch P;
  P.map = gp;
  P.us = column_params(d, nu);
  P.vs.resize(nv);
  for (int j = 0; j < nv; ++j) P.vs[j] = j == nv - 1 ? h : h * j / (nv - 1);
  const int NU = P.nu();
  P.W.resize(static_cast<std::size_t>(NU) * nv);
  P.normals.resize(P.W.size());
  P.corner.assign(P.W.size(), 0);

  const int ib = static_cast<int>(std::lower_bound(P.us.begin(), P.us.end(), b0 - kNodeTol) - P.us.begin());

  // base column, sequential
  std::vector<PhiPair> column(nv);
  for (int j = 1; j < nv; ++j)
    column[j] = column[j - 1] + integrate_segment(g, cplx(b0, P.vs[j - 1]), std::nullopt, cplx(b0, P.vs[j]),
                                                  std::nullopt, opt.quad);

  auto do_row = [&](int j) {
    const bool edge_row = j == 0 || j == nv - 1;
    std::vector<std::optional<Anchor>> anchors(NU);
    if (edge_row)
      for (int i = 0; i < NU; ++i) anchors[i] = g.anchor_at(P.param(i, j), 1e-11);
    auto store = [&](int i, const PhiPair& phi) {
      const cplx z = P.param(i, j);
      const std::size_t idx = P.index(i, j);
      P.W[idx] = w_from_phi(phi, z, b0);
      if (anchors[i]) {
        P.normals[idx] = corner_normal(g, *anchors[i]);
        P.corner[idx] = 1;
      } else {
        P.normals[idx] = normal_from_gauss(g(z));
      }
    };
    store(ib, column[j]);
    PhiPair run = column[j];
    for (int i = ib + 1; i < NU; ++i) {
      run += integrate_segment(g, P.param(i - 1, j), anchors[i - 1], P.param(i, j), anchors[i], opt.quad);
      store(i, run);
    }
    run = column[j];
    for (int i = ib - 1; i >= 0; --i) {
      run += integrate_segment(g, P.param(i + 1, j), anchors[i + 1], P.param(i, j), anchors[i], opt.quad);
      store(i, run);
    }
  };

  if (opt.parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < nv; ++j) {
      try {
        do_row(j);
      } catch (...) {
#pragma omp critical(tpms_patch_error)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (int j = 0; j < nv; ++j) do_row(j);
  }

  for (int row : {0, nv - 1}) {
    const Edge e = row == 0 ? Edge::Lower : Edge::Upper;
    auto& tags = row == 0 ? P.lower_labels : P.upper_labels;
    tags.resize(NU);
    for (int i = 0; i < NU; ++i) {
      if (P.is_corner(i, row)) {
        tags[i] = segment_label(d, e, P.us[i] - 1e-9) + "|" + segment_label(d, e, P.us[i] + 1e-9);
      } else {
        tags[i] = segment_label(d, e, P.us[i]);
      }
    }
  }
  return P;
}

SurfacePatch conjugate_patch(const SurfacePatch& p) {
  SurfacePatch q = p;
  q.c = p.c * cplx(0.0, -1.0);
  return q;
}

VerticalPlane plane_of(const SurfacePatch& p, const std::string& label) {
  const auto nodes = p.boundary_nodes(label);
  std::vector<Eigen::Vector2d> xy;
  for (auto [i, j] : nodes) {
    const Vec3 x = p.point(i, j);
    const Eigen::Vector2d v(x[0], x[1]);
    bool dup = false;
    for (const auto& w : xy) dup = dup || (w - v).norm() < 1e-12;
    if (!dup) xy.push_back(v);
  }
  if (xy.size() < 3) throw Error(ErrorKind::DegenerateEdge, "boundary " + label + " has fewer than 3 distinct points");
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& v : xy) mean += v;
  mean /= static_cast<double>(xy.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& v : xy) cov += (v - mean) * (v - mean).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  if (es.eigenvalues()(1) < 1e-24)
    throw Error(ErrorKind::DegenerateEdge, "boundary " + label + " projects to a point");
  VerticalPlane pl;
  pl.label = label;
  pl.n = es.eigenvectors().col(0).normalized();
  pl.offset = pl.n.dot(mean);
  // orient away from the neighbouring interior row
  Eigen::Vector2d inner = Eigen::Vector2d::Zero();
  for (auto [i, j] : nodes) {
    const int jj = j == 0 ? 1 : p.nv() - 2;
    const Vec3 x = p.point(i, jj);
    inner += Eigen::Vector2d(x[0], x[1]);
  }
  inner /= static_cast<double>(nodes.size());
  if (pl.n.dot(inner) - pl.offset > 0.0) {
    pl.n = -pl.n;
    pl.offset = -pl.offset;
  }
  pl.residual = 0.0;
  for (const auto& v : xy) pl.residual = std::max(pl.residual, std::abs(pl.n.dot(v) - pl.offset));
  return pl;
}

double dihedral_angle(const VerticalPlane& a, const VerticalPlane& b) {
  return kPi - std::acos(std::clamp(a.n.dot(b.n), -1.0, 1.0));
}

double straightness_defect(const SurfacePatch& p, const std::string& label) {
  double worst = 0.0;
  for (const auto& run : p.boundary_runs(label)) {
    if (run.size() < 3) continue;
    const Vec3 a = p.point(run.front().first, run.front().second);
    const Vec3 b = p.point(run.back().first, run.back().second);
    const Vec3 u = (b - a).normalized();
    for (auto [i, j] : run) {
      const Vec3 r = p.point(i, j) - a;
      worst = std::max(worst, (r - r.dot(u) * u).norm());
    }
  }
  return worst;
}

// --- quality metrics ---

std::vector<std::pair<int, int>> smooth_interior_nodes(const SurfacePatch& p, double clearance) {
  const DivisorSpec& d = p.map->divisor();
  std::vector<cplx> sing;
  for (Edge e : {Edge::Lower, Edge::Upper})
    for (std::size_t k = 0; k < d.edge(e).size(); ++k)
      for (int shift = -2; shift <= 2; ++shift) sing.push_back(d.point(e, k) + static_cast<double>(shift));
  std::vector<std::pair<int, int>> out;
  auto uniform = [](const std::vector<double>& x, int i) {
    const double h = x[i + 1] - x[i];
    for (int k = i - 2; k < i + 2; ++k)
      if (std::abs(x[k + 1] - x[k] - h) > 1e-9 * h) return false;
    return true;
  };
  for (int j = 2; j + 2 < p.nv(); ++j) {
    for (int i = 2; i + 2 < p.nu(); ++i) {
      if (!uniform(p.us, i) || !uniform(p.vs, j)) continue;
      const cplx z = p.param(i, j);
      bool clear = true;
      for (const cplx& s : sing) clear = clear && std::abs(z - s) >= clearance;
      if (clear) out.emplace_back(i, j);
    }
  }
  return out;
}

PatchQuality patch_quality(const SurfacePatch& p, double clearance) {
  PatchQuality q;
  const auto nodes = smooth_interior_nodes(p, clearance);
  q.nodes = nodes.size();
  for (auto [i, j] : nodes) {
    const double hu = p.us[i + 1] - p.us[i], hv = p.vs[j + 1] - p.vs[j];
    const Vec3 x = p.local_point(i, j);
    const Vec3 xe = p.local_point(i + 1, j), xw = p.local_point(i - 1, j);
    const Vec3 xn = p.local_point(i, j + 1), xs = p.local_point(i, j - 1);
    const Vec3 lap = (xe - 2.0 * x + xw) / (hu * hu) + (xn - 2.0 * x + xs) / (hv * hv);
    q.harmonicity = std::max(q.harmonicity, lap.cwiseAbs().maxCoeff());
    // fourth-order tangents
    const Vec3 xu = (8.0 * (xe - xw) - (p.local_point(i + 2, j) - p.local_point(i - 2, j))) / (12.0 * hu);
    const Vec3 xv = (8.0 * (xn - xs) - (p.local_point(i, j + 2) - p.local_point(i, j - 2))) / (12.0 * hv);
    const double E = xu.squaredNorm(), G = xv.squaredNorm(), F = xu.dot(xv);
    q.conformality = std::max({q.conformality, std::abs(E - G) / (E + G), 2.0 * std::abs(F) / (E + G)});
    const Vec3 ng = xu.cross(xv).normalized();
    const Vec3 nm = p.R.transpose() * p.normal(i, j);
    q.normal_angle = std::max(q.normal_angle, std::acos(std::clamp(ng.dot(nm), -1.0, 1.0)));
  }
  return q;
}

double vertical_period_error(const GaussMap& g, int samples, const QuadratureOptions& quad) {
  IntegralCache cache(quad);
  const double h = g.torus().strip_height();
  const double base = g.divisor().base_point();
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    // low-discrepancy points strictly inside the strip
    const double u = std::fmod(0.5 + k * 0.6180339887498949, 1.0);
    const double v = std::fmod(0.5 + k * 0.7548776662466927, 1.0);
    const cplx z(base - 0.5 + u, h * (0.05 + 0.9 * v));
    const Vec3 a = surface_point(z, g, cache);
    const Vec3 b = surface_point(z + 1.0, g, cache);
    worst = std::max(worst, (b - a - Vec3(0.0, 0.0, 1.0)).norm());
  }
  return worst;
}

}  // namespace tpms
