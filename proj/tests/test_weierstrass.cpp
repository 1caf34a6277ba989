#include <cmath>

#include "doctest.h"
#include "tpms/catalog.hpp"
#include "tpms/error.hpp"
#include "tpms/weierstrass.hpp"

using namespace tpms;

namespace {

std::shared_ptr<const GaussMap> map_for(const FamilySpec& f, const std::vector<double>& full, double d = 1.0) {
  return std::make_shared<const GaussMap>(expand(family_divisor(f, TorusParams(d), full)));
}

std::shared_ptr<const GaussMap> schwarz_p() { return map_for(basic_family(2, 4, 4), {0.25}); }

}  // namespace

TEST_CASE("third coordinate is Re z and the base maps to the origin") {
  const auto g = schwarz_p();
  IntegralCache cache;
  CHECK(surface_point(0.0, *g, cache).norm() < 1e-15);
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.3, 0.45), cplx(0.49, 0.01)})
    CHECK(surface_point(z, *g, cache)[2] == doctest::Approx(z.real()).epsilon(1e-15));
}

TEST_CASE("horizontal projection formula and mirror symmetry") {
  const auto g = schwarz_p();
  IntegralCache cache;
  const cplx z(0.17, 0.31);
  const PhiPair phi = cache.at(*g, z);
  const Vec3 x = surface_point(z, *g, cache);
  const cplx F = horizontal_projection(phi);
  CHECK(std::abs(F - cplx(x[0], x[1])) < 1e-14);
  // the imaginary axis is a horizontal symmetry curve: F(-conj z) = F(z)
  const Vec3 y = surface_point(-std::conj(z), *g, cache);
  CHECK(std::abs(y[0] - x[0]) < 1e-13);
  CHECK(std::abs(y[1] - x[1]) < 1e-13);
  CHECK(y[2] == doctest::Approx(-x[2]));
}

TEST_CASE("normal from the Gauss map") {
  CHECK((normal_from_gauss(0.0) - Vec3(0, 0, -1)).norm() < 1e-15);
  CHECK((normal_from_gauss(1.0) - Vec3(1, 0, 0)).norm() < 1e-15);
  CHECK((normal_from_gauss(cplx(0, 1)) - Vec3(0, 1, 0)).norm() < 1e-15);
  CHECK(normal_from_gauss(cplx(0.3, -2.0)).norm() == doctest::Approx(1.0));
}

TEST_CASE("boundary segments and labels") {
  const auto g = schwarz_p();
  const auto segs = boundary_segments(g->divisor());
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].label == "L0");
  CHECK(segs[0].x0 == doctest::Approx(0.25));
  CHECK(segs[0].x1 == doctest::Approx(0.75));
  CHECK(segs[1].label == "L1");
  CHECK(segs[2].label == "U");
  CHECK(segment_label(g->divisor(), Edge::Lower, 0.1) == "L1");
  CHECK(segment_label(g->divisor(), Edge::Lower, 1.5) == "L0");
}

TEST_CASE("basic patch: planar boundary, wedge angles pi a and pi/s") {
  for (const auto& t : basic_triples()) {
    const FamilySpec f = basic_family(t.r, t.s, t.t);
    const SurfacePatch p = make_patch(map_for(f, {f.fixed_p->to_double()}), 24, 16);
    const VerticalPlane l0 = plane_of(p, "L0"), l1 = plane_of(p, "L1"), u = plane_of(p, "U");
    CHECK(l0.residual < 1e-6);
    CHECK(l1.residual < 1e-6);
    CHECK(u.residual < 1e-6);
    CHECK(dihedral_angle(l0, l1) == doctest::Approx(kPi / t.r).epsilon(1e-6));
    CHECK(dihedral_angle(l1, u) == doctest::Approx(kPi / t.s).epsilon(1e-6));
    CHECK(dihedral_angle(l0, u) == doctest::Approx(kPi / t.t).epsilon(1e-6));
  }
}

TEST_CASE("patch grid contains every pre-vertex and is self-convergent") {
  const auto g = schwarz_p();
  const SurfacePatch a = make_patch(g, 17, 9), b = make_patch(g, 33, 17);
  CHECK(std::find(a.us.begin(), a.us.end(), 0.25) != a.us.end());
  CHECK(a.vs.back() == doctest::Approx(0.5));
  int corners = 0;
  for (int i = 0; i < a.nu(); ++i) corners += a.is_corner(i, 0);
  CHECK(corners == 2);
  // nodes of the coarse grid are nodes of the fine one
  double worst = 0.0;
  for (int j = 0; j < a.nv(); ++j)
    for (int i = 0; i < a.nu(); ++i) {
      const auto ib = std::find(b.us.begin(), b.us.end(), a.us[i]) - b.us.begin();
      const auto jb = std::find(b.vs.begin(), b.vs.end(), a.vs[j]) - b.vs.begin();
      REQUIRE(ib < b.nu());
      REQUIRE(jb < b.nv());
      worst = std::max(worst, (a.point(i, j) - b.point(int(ib), int(jb))).norm());
    }
  CHECK(worst < 1e-7);
}

TEST_CASE("serial and parallel patches agree bit for bit") {
  const auto g = map_for(opposite_sign_family(4, 4), {1.0 / 6, 1.0 / 3});
  PatchOptions serial;
  serial.parallel = false;
  const SurfacePatch a = make_patch(g, 20, 12), b = make_patch(g, 20, 12, serial);
  REQUIRE(a.W.size() == b.W.size());
  bool same = true;
  for (std::size_t k = 0; k < a.W.size(); ++k)
    for (int c = 0; c < 3; ++c) same = same && a.W[k][c] == b.W[k][c];
  CHECK(same);
}

TEST_CASE("conjugate patch: straight boundary, conjugating twice negates") {
  const auto g = schwarz_p();
  const SurfacePatch p = make_patch(g, 24, 16);
  const SurfacePatch c = conjugate_patch(p);
  for (const auto& label : c.labels()) CHECK(straightness_defect(c, label) < 1e-6);
  const SurfacePatch cc = conjugate_patch(c);
  for (int j = 0; j < p.nv(); j += 5)
    for (int i = 0; i < p.nu(); i += 5) CHECK((cc.point(i, j) + p.point(i, j)).norm() < 1e-14);
}

TEST_CASE("plane_of orientation and errors") {
  const auto g = schwarz_p();
  const SurfacePatch p = make_patch(g, 24, 16);
  const VerticalPlane u = plane_of(p, "U");
  // the neighbouring interior row lies on the negative side
  const int j = p.nv() - 2;
  for (int i = 0; i < p.nu(); i += 4) {
    const Vec3 x = p.point(i, j);
    CHECK(u.n.dot(Eigen::Vector2d(x[0], x[1])) - u.offset <= 1e-12);
  }
  CHECK_THROWS_AS(plane_of(p, "U7"), Error);
}

TEST_CASE("quality metrics on Schwarz P") {
  const auto g = schwarz_p();
  const PatchQuality q32 = patch_quality(make_patch(g, 32, 32));
  const PatchQuality q64 = patch_quality(make_patch(g, 64, 64));
  CHECK(q64.nodes > q32.nodes);
  const double ratio = q32.harmonicity / q64.harmonicity;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
  CHECK(q64.conformality < 1e-3);
  CHECK(q64.conformality < q32.conformality);
  CHECK(q64.normal_angle < 1e-3);
  CHECK(vertical_period_error(*g, 16) < 1e-8);
}

TEST_CASE("patch resolution guard") { CHECK_THROWS_AS(make_patch(schwarz_p(), 4, 16), Error); }
