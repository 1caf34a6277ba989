#include "tpms/scmap.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "tpms/error.hpp"

namespace tpms {

namespace {

constexpr double kEdgeTol = 1e-12;

double wrap_distance(cplx w) {
  return std::hypot(w.real() - std::round(w.real()), w.imag());
}

}  // namespace

GaussMap::GaussMap(DivisorSpec divisor) : divisor_(std::move(divisor)) {
  const cplx base(divisor_.base_point(), 0.0);
  phase_ = -raw_log(base, nullptr, 0.0).imag();
}

cplx GaussMap::raw_log(cplx z, const Anchor* anchor, cplx delta) const {
  const TorusParams& t = divisor_.torus();
  const double h = t.strip_height();
  cplx sum = 0.0;
  const auto& lower = divisor_.lower();
  for (std::size_t i = 0; i < lower.size(); ++i) {
    const double e = lower[i].exponent.to_double();
    cplx l;
    if (anchor && anchor->edge == Edge::Lower && anchor->index == i) {
      l = log_theta(delta, t, HalfStrip::Upper) - cplx(0.0, kPi * anchor->shift);
    } else {
      const cplx w = z - lower[i].x;
      if (wrap_distance(w) < exclusion_)
        throw Error(ErrorKind::PoleProximity, "Gauss map evaluated next to lower pre-vertex " + std::to_string(i));
      l = log_theta(w, t, HalfStrip::Upper);
    }
    sum += e * l;
  }
  const auto& upper = divisor_.upper();
  for (std::size_t j = 0; j < upper.size(); ++j) {
    const double e = upper[j].exponent.to_double();
    cplx l;
    if (anchor && anchor->edge == Edge::Upper && anchor->index == j) {
      l = log_theta(delta, t, HalfStrip::Lower) + cplx(0.0, kPi * anchor->shift);
    } else {
      const cplx w = z - cplx(upper[j].x, h);
      if (wrap_distance(w) < exclusion_)
        throw Error(ErrorKind::PoleProximity, "Gauss map evaluated next to upper pre-vertex " + std::to_string(j));
      l = log_theta(w, t, HalfStrip::Lower);
    }
    sum += e * l;
  }
  return sum;
}

cplx GaussMap::log_value(cplx z) const { return raw_log(z, nullptr, 0.0) + cplx(0.0, phase_); }

cplx GaussMap::log_value(const Anchor& anchor, cplx delta) const {
  return raw_log(anchor_point(anchor) + delta, &anchor, delta) + cplx(0.0, phase_);
}

cplx GaussMap::tracked(cplx z, BranchState& state) const {
  const TorusParams& t = divisor_.torus();
  const double h = t.strip_height();
  const auto& lower = divisor_.lower();
  const auto& upper = divisor_.upper();
  const std::size_t nf = lower.size() + upper.size();
  const bool in_strip = z.imag() >= -kEdgeTol && z.imag() <= h + kEdgeTol;
  if (!state.started) state.args.assign(nf, 0.0);
  cplx sum = 0.0;
  for (std::size_t f = 0; f < nf; ++f) {
    const bool is_lower = f < lower.size();
    const Prevertex& v = is_lower ? lower[f] : upper[f - lower.size()];
    const cplx w = is_lower ? z - v.x : z - cplx(v.x, h);
    if (lattice_distance(w, t) < exclusion_)
      throw Error(ErrorKind::PoleProximity, "tracked Gauss map evaluated next to a theta zero");
    const cplx th = theta(w, t);
    double arg = std::arg(th);
    if (!state.started) {
      if (in_strip) arg = log_theta(w, t, is_lower ? HalfStrip::Upper : HalfStrip::Lower).imag();
    } else {
      const double prev = state.args[f];
      arg = prev + std::remainder(arg - prev, 2.0 * kPi);
    }
    state.args[f] = arg;
    sum += v.exponent.to_double() * cplx(std::log(std::abs(th)), arg);
  }
  state.started = true;
  return std::exp(sum + cplx(0.0, phase_));
}

std::optional<Anchor> GaussMap::anchor_at(cplx z, double tol) const {
  const double h = divisor_.torus().strip_height();
  auto search = [&](Edge e) -> std::optional<Anchor> {
    const auto& pts = divisor_.edge(e);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double k = std::round(z.real() - pts[i].x);
      if (std::abs(z.real() - pts[i].x - k) < tol) return Anchor{e, i, static_cast<int>(k)};
    }
    return std::nullopt;
  };
  if (std::abs(z.imag()) < tol) return search(Edge::Lower);
  if (std::abs(z.imag() - h) < tol) return search(Edge::Upper);
  return std::nullopt;
}

cplx GaussMap::anchor_point(const Anchor& a) const {
  return divisor_.point(a.edge, a.index) + static_cast<double>(a.shift);
}

namespace {

// Distance from c to the open segment (a,b).
double segment_distance(cplx c, cplx a, cplx b) {
  const cplx ab = b - a;
  const double t = std::clamp(((c - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0);
  return std::abs(a + t * ab - c);
}

void check_segment(const GaussMap& g, cplx a, cplx b) {
  const DivisorSpec& d = g.divisor();
  const double h = d.torus().strip_height();
  const double lo = std::floor(std::min(a.real(), b.real())) - 1.0;
  const double hi = std::ceil(std::max(a.real(), b.real())) + 1.0;
  for (Edge e : {Edge::Lower, Edge::Upper}) {
    for (const auto& v : d.edge(e)) {
      for (double k = lo; k <= hi; k += 1.0) {
        const cplx c(v.x + k, e == Edge::Lower ? 0.0 : h);
        if (std::abs(c - a) < kEdgeTol || std::abs(c - b) < kEdgeTol) continue;
        if (segment_distance(c, a, b) < g.exclusion())
          throw Error(ErrorKind::PoleProximity, "path segment passes through a pre-vertex");
      }
    }
  }
}

}  // namespace

StripPath StripPath::through(const GaussMap& g, std::vector<cplx> waypoints) {
  const double h = g.torus().strip_height();
  StripPath path;
  for (cplx w : waypoints) {
    if (w.imag() < -kEdgeTol || w.imag() > h + kEdgeTol)
      throw Error(ErrorKind::InvalidArgument, "path waypoint outside the closed strip");
    if (std::abs(w.imag()) < kEdgeTol) w.imag(0.0);
    if (std::abs(w.imag() - h) < kEdgeTol) w.imag(h);
    auto anchor = g.anchor_at(w, 1e-12);
    if (anchor) w = g.anchor_point(*anchor);
    if (!path.waypoints.empty() && std::abs(w - path.waypoints.back()) < kEdgeTol)
      throw Error(ErrorKind::InvalidArgument, "consecutive path waypoints coincide");
    path.waypoints.push_back(w);
    path.anchors.push_back(anchor);
  }
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) check_segment(g, path.waypoints[i], path.waypoints[i + 1]);
  return path;
}

StripPath StripPath::canonical(const GaussMap& g, cplx z) {
  const DivisorSpec& d = g.divisor();
  const double h = d.torus().strip_height();
  const double b0 = d.base_point();
  if (std::abs(z.imag()) < kEdgeTol) z.imag(0.0);
  if (std::abs(z.imag() - h) < kEdgeTol) z.imag(h);
  std::vector<cplx> pts{cplx(b0, 0.0)};
  if (z.imag() > 0.0) pts.emplace_back(b0, z.imag());
  const bool on_edge = z.imag() == 0.0 || z.imag() == h;
  if (on_edge) {
    const Edge e = z.imag() == 0.0 ? Edge::Lower : Edge::Upper;
    const double x0 = b0, x1 = z.real();
    std::vector<double> hits;
    const double lo = std::min(x0, x1), hi = std::max(x0, x1);
    for (const auto& v : d.edge(e)) {
      for (double k = std::floor(lo) - 1.0; k <= std::ceil(hi) + 1.0; k += 1.0) {
        const double x = v.x + k;
        if (x > lo + kEdgeTol && x < hi - kEdgeTol) hits.push_back(x);
      }
    }
    std::sort(hits.begin(), hits.end());
    if (x1 < x0) std::reverse(hits.begin(), hits.end());
    for (double x : hits) pts.emplace_back(x, z.imag());
  }
  if (std::abs(z - pts.back()) > kEdgeTol) pts.push_back(z);
  return through(g, std::move(pts));
}

PhiPair integrate_segment(const GaussMap& g, cplx a, const std::optional<Anchor>& anchor_a, cplx b,
                          const std::optional<Anchor>& anchor_b, const QuadratureOptions& opt) {
  std::array<EndpointBehavior, 2> ea{}, eb{};
  if (anchor_a) {
    const double e = g.exponent(*anchor_a);
    ea = {EndpointBehavior{true, e}, EndpointBehavior{true, -e}};
  }
  if (anchor_b) {
    const double e = g.exponent(*anchor_b);
    eb = {EndpointBehavior{true, e}, EndpointBehavior{true, -e}};
  }
  auto f = [&](cplx z, cplx da, cplx db) {
    cplx lg;
    if (anchor_a && (!anchor_b || std::abs(da) <= std::abs(db))) {
      lg = g.log_value(*anchor_a, da);
    } else if (anchor_b) {
      lg = g.log_value(*anchor_b, db);
    } else {
      lg = g.log_value(z);
    }
    return std::array<cplx, 2>{std::exp(lg), std::exp(-lg)};
  };
  const auto r = integrate_segment<2>(f, a, b, ea, eb, opt);
  return {r[0], r[1]};
}

PhiPair integrate_path(const GaussMap& g, const StripPath& path, const QuadratureOptions& opt) {
  PhiPair total;
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i)
    total += integrate_segment(g, path.waypoints[i], path.anchors[i], path.waypoints[i + 1], path.anchors[i + 1], opt);
  return total;
}

cplx sc_integrate(const GaussMap& g, const StripPath& path, IntegrandMode mode, const QuadratureOptions& opt) {
  return integrate_path(g, path, opt).get(mode);
}

PhiPair IntegralCache::at(const GaussMap& g, cplx z) {
  const StripPath path = StripPath::canonical(g, z);
  const auto& w = path.waypoints;
  const std::size_t last = w.size() - 1;
  std::size_t start = 0;
  PhiPair running;
  for (std::size_t j = last; j >= 1; --j) {
    auto it = memo_.find({w[j].real(), w[j].imag()});
    if (it != memo_.end()) {
      start = j;
      running = it->second;
      break;
    }
  }
  for (std::size_t j = start; j < last; ++j) {
    running += integrate_segment(g, w[j], path.anchors[j], w[j + 1], path.anchors[j + 1], opt_);
    if (path.anchors[j + 1] || j + 1 == 1) memo_[{w[j + 1].real(), w[j + 1].imag()}] = running;
  }
  return running;
}

PolygonImage polygon_image(const GaussMap& g, Edge edge, int periods, IntegrandMode mode,
                           const QuadratureOptions& opt) {
  if (periods < 1) throw Error(ErrorKind::InvalidArgument, "polygon_image needs at least one period");
  const DivisorSpec& d = g.divisor();
  const double y = edge == Edge::Lower ? 0.0 : d.torus().strip_height();
  const auto& pts = d.edge(edge);
  IntegralCache cache(opt);
  PolygonImage img;
  const double b0 = d.base_point();
  if (pts.empty()) {
    img.translation = (cache.at(g, cplx(b0 + 1.0, y)) - cache.at(g, cplx(b0, y))).get(mode);
    return img;
  }
  std::vector<double> xs;
  for (int k = 0; k < periods; ++k)
    for (const auto& v : pts) xs.push_back(v.x + k);
  xs.push_back(pts.front().x + periods);
  for (double x : xs) img.vertices.push_back(cache.at(g, cplx(x, y)).get(mode));
  img.translation = img.vertices[pts.size()] - img.vertices[0];
  for (std::size_t i = 0; i + 1 < img.vertices.size(); ++i) {
    const cplx dv = img.vertices[i + 1] - img.vertices[i];
    img.edge_directions.push_back(dv / std::abs(dv));
  }
  for (std::size_t i = 1; i < img.edge_directions.size(); ++i) {
    const double turn = std::arg(img.edge_directions[i] / img.edge_directions[i - 1]);
    img.interior_angles.push_back(edge == Edge::Lower ? kPi - turn : kPi + turn);
  }
  return img;
}

void write_polygon_csv(std::ostream& os, const PolygonImage& poly) {
  os << "index,x,y\r\n";
  char buf[96];
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\r\n", i, poly.vertices[i].real(), poly.vertices[i].imag());
    os << buf;
  }
}

}  // namespace tpms
