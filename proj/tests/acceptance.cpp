// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "tpms/assembly.hpp"
#include "tpms/period.hpp"
#include "tpms/theta.hpp"

using namespace tpms;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  failures += !o.pass;
  std::printf("%s %2d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SurfacePatch patch_of(const FamilySpec& f, const TorusParams& t, const std::vector<double>& full, int n) {
  return make_patch(std::make_shared<const GaussMap>(expand(family_divisor(f, t, full))), n, n);
}

// arg G continued along the imaginary axis from 0 to i d/2
double tracked_arg_change(const GaussMap& g, int steps) {
  BranchState st;
  const double h = g.torus().strip_height();
  double prev = std::arg(g.tracked(0.0, st)), total = 0.0;
  for (int k = 1; k <= steps; ++k) {
    const double a = std::arg(g.tracked(cplx(0.0, h * k / steps), st));
    total += std::remainder(a - prev, 2.0 * kPi);
    prev = a;
  }
  return total;
}

Outcome theta_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double d : {0.5, 1.0, 2.0}) worst = std::max(worst, theta_identity_errors(TorusParams(d), 1000).max());
  const double secs = seconds_since(t0);
  return {worst < 1e-10 && secs < 5.0, fmt("max relative error %.2e (< 1e-10), %.2f s (< 5 s)", worst, secs)};
}

Outcome basic_table() {
  const auto t0 = std::chrono::steady_clock::now();
  int exact = 0, rows = 0;
  double worst = 0.0;
  for (const auto& t : basic_triples()) {
    ++rows;
    exact += basic_p(t.r, t.s) == tabulated_basic_p(t);
    const FamilySpec f = basic_family(t.r, t.s, t.t);
    const SurfacePatch p = patch_of(f, TorusParams(1.0), {f.fixed_p->to_double()}, 32);
    const VerticalPlane a = plane_of(p, "L1"), b = plane_of(p, "U");
    const double ang = std::acos(std::min(1.0, std::abs(a.n.dot(b.n))));
    worst = std::max(worst, std::abs(ang - kPi / t.s));
  }
  const double secs = seconds_since(t0);
  return {exact == rows && rows == 10 && worst < 1e-6 && secs < 120.0,
          fmt("%d/%d rows exact, max angle error %.2e (< 1e-6), %.1f s", exact, rows, worst, secs)};
}

Outcome random_divisors() {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> num(-11, 11);
  std::uniform_real_distribution<double> pos(0.03, 0.47), dd(0.5, 2.0);
  int tested = 0;
  double worst = 0.0;
  while (tested < 20) {
    std::vector<double> xs{pos(rng), pos(rng), pos(rng)};
    std::sort(xs.begin(), xs.end());
    if (xs[1] - xs[0] < 0.02 || xs[2] - xs[1] < 0.02) continue;
    const SymmetricDivisorSpec s(TorusParams(dd(rng)), {{xs[0], Rational(num(rng), 12)}},
                                 {{xs[1], Rational(num(rng), 12)}, {xs[2], Rational(num(rng), 12)}});
    const GaussMap g(expand(s));
    worst = std::max(worst, std::abs(tracked_arg_change(g, 400) - plane_angle_general(s)));
    ++tested;
  }
  return {worst < 1e-8, fmt("%d divisors, max |tracked - formula| %.2e (< 1e-8)", tested, worst)};
}

Outcome constraint_tables() {
  struct Row {
    bool equal;
    int r, s;
    IntegerConstraint c;
  };
  const std::vector<Row> rows = {
      {true, 2, 3, {6, 8, 1}},    {true, 2, 4, {4, 6, 1}},     {true, 3, 6, {8, 10, 3}},   {true, 6, 2, {5, 3, 1}},
      {false, 2, 4, {2, -3, -1}}, {false, 2, 6, {6, -10, -3}}, {false, 2, 3, {6, -8, -3}}, {false, 3, 6, {4, -5, -1}},
      {false, 4, 4, {6, -6, -1}}, {false, 3, 3, {4, -4, -1}},
  };
  int ok = 0;
  std::string bad;
  for (const auto& row : rows) {
    const FamilySpec f = row.equal ? equal_sign_family(row.r, row.s) : opposite_sign_family(row.r, row.s);
    const IntegerConstraint c = constraint_of(f);
    if (c == row.c)
      ++ok;
    else
      bad += " " + f.name + ": " + c.str();
  }
  return {ok == 10, fmt("%d/10 rows", ok) + bad};
}

Outcome closed_forms() {
  const TorusParams t(1.0);
  double worst_p = 0.0, worst_res = 0.0;
  std::string detail;
  for (auto [r, pc, qc] : {std::tuple{4, 1.0 / 6, 1.0 / 3}, {3, 1.0 / 8, 3.0 / 8}}) {
    const FamilySpec f = opposite_sign_family(r, r);
    const RootResult res = solve_opposite_sign(f, t);
    worst_p = std::max({worst_p, std::abs(res.free[0] - pc), std::abs(res.full.at(1) - qc)});
    worst_res = std::max(worst_res, std::abs(period_residual(f, t, {pc}).at(0)));
    detail += fmt("%s p=%.12f ", f.name.c_str(), res.free[0]);
  }
  return {worst_p < 1e-9 && worst_res < 1e-8,
          detail + fmt("| max |p - closed form| %.2e (< 1e-9), residual %.2e (< 1e-8)", worst_p, worst_res)};
}

Outcome equal_sign_ivt() {
  const auto t0 = std::chrono::steady_clock::now();
  int ok = 0, total = 0;
  double worst = 0.0;
  std::string bad;
  for (auto [r, s] : equal_sign_pairs()) {
    const FamilySpec f = equal_sign_family(r, s);
    for (double d : {0.6, 1.0, 1.5}) {
      ++total;
      const TorusParams t(d);
      const Scan1D scan = scan_1d(f, t);
      const bool signs = scan.points.front().residual * scan.points.back().residual < 0.0;
      const RootResult res = solve_equal_sign(f, t);
      const double r0 = max_abs(res.residual);
      worst = std::max(worst, r0);
      if (signs && r0 < 1e-9)
        ++ok;
      else
        bad += fmt(" (%d,%d) d=%g", r, s, d);
    }
  }
  const double secs = seconds_since(t0);
  return {ok == total && secs < 600.0,
          fmt("%d/%d cases, max final |residual| %.2e (< 1e-9), %.1f s", ok, total, worst, secs) + bad};
}

Outcome impossibility() {
  const ImpossibilityReport r = impossibility_scan({3, 3, 3}, {1.0, 0.7, 0.5, 0.35}, 32);
  bool constant = true;
  std::string infs;
  for (const auto& row : r.rows) {
    constant = constant && row.constant_sign;
    infs += fmt(" %.3g", row.inf_abs);
  }
  return {constant && r.inf_decreasing,
          std::string(constant ? "constant sign" : "sign change") + ", inf|residual| by d (1, 0.7, 0.5, 0.35):" + infs +
              (r.inf_decreasing ? " decreasing" : " not decreasing")};
}

Outcome surface_quality() {
  bool pass = true;
  std::string detail;
  const TorusParams t(1.0);
  const std::vector<std::pair<FamilySpec, std::vector<double>>> cases = {
      {basic_family(2, 4, 4), {0.25}},
      {opposite_sign_family(4, 4), {}},
  };
  for (auto [f, full] : cases) {
    if (full.empty()) full = full_parameters(f, {1.0 / 6});
    auto g = std::make_shared<const GaussMap>(expand(family_divisor(f, t, full)));
    const SurfacePatch fine = make_patch(g, 64, 64);
    const PatchQuality q = patch_quality(fine), qc = patch_quality(make_patch(g, 32, 32));
    const double ratio = qc.harmonicity / q.harmonicity;
    double planar = 0.0;
    for (const auto& label : fine.labels()) planar = std::max(planar, plane_of(fine, label).residual);
    const double vp = vertical_period_error(*g, 64);
    const TriangleGroup grp = group_for_patch(fine, f.rst);
    const MeasuredTriangle tri = measure_triangle(align_patch(fine, grp));
    double angle_err = 0.0;
    for (int k = 0; k < 3; ++k) {
      double best = 1e300;
      for (int m = 0; m < 3; ++m) best = std::min(best, std::abs(tri.angles[k] - grp.angles[m]));
      angle_err = std::max(angle_err, best);
    }
    const bool ok = ratio > 3.0 && ratio < 5.0 && q.conformality < 1e-3 && planar < 1e-6 && vp < 1e-8 &&
                    angle_err < 1e-5;
    pass = pass && ok;
    detail += fmt("%s: harmonicity ratio %.2f, conformality %.1e, planarity %.1e, vertical period %.1e, "
                  "dihedral %.1e; ",
                  f.name.c_str(), ratio, q.conformality, planar, vp, angle_err);
  }
  return {pass, detail};
}

Outcome assembly() {
  const FamilySpec f = basic_family(2, 4, 4);
  const SurfacePatch p = patch_of(f, TorusParams(1.0), {0.25}, 64);
  const TriangleGroup g = group_for_patch(p, f.rst);
  const SurfacePatch a = align_patch(p, g);
  const double gap = seam_gap(a, g);
  const TriplyPeriodicMesh m = replicate(a, g, 3);
  Mat3 L;
  for (int k = 0; k < 3; ++k) L.col(k) = m.lattice[k];
  const double det = std::abs(L.determinant());
  const SpotCheckReport s = self_intersection_spot_check(m, 100000);
  return {det > 1e-6 && gap < 1e-6 && s.intersections == 0 && s.pairs_tested == 100000,
          fmt("|det lattice| %.3g, seam gap %.1e, %zu intersections in %zu pairs (%zu nearby), %zu triangles", det,
              gap, s.intersections, s.pairs_tested, s.candidate_pairs, m.triangles.size())};
}

Outcome neovius() {
  const FamilySpec f = neovius_family(2, 4, 4);
  std::string at_smaller_d;
  try {
    const RootResult r = solve_neovius_reduced(f, TorusParams(0.7));
    at_smaller_d = fmt("; at d = 0.7: q1 = %.12f, residual %.1e", r.full.at(1), max_abs(r.residual));
  } catch (const std::exception& e) {
    at_smaller_d = std::string("; at d = 0.7: ") + e.what();
  }
  try {
    const RootResult r = solve_neovius_reduced(f, TorusParams(1.0));
    const double res = max_abs(r.residual);
    return {res < 1e-10, fmt("d = 1: q1 = %.12f, residual %.1e (< 1e-10)", r.full.at(1), res) + at_smaller_d};
  } catch (const Error& e) {
    return {false, std::string("d = 1: ") + e.what() + at_smaller_d};
  }
}

}  // namespace

int main() {
  criterion(1, "theta identities", theta_suite);
  criterion(2, "basic table and plane angles", basic_table);
  criterion(3, "tracked arg of G on random divisors", random_divisors);
  criterion(4, "integer constraint tables", constraint_tables);
  criterion(5, "I-WP and T-WP closed forms", closed_forms);
  criterion(6, "equal-sign sign change and bisection", equal_sign_ivt);
  criterion(7, "(3,3,3) four-corner impossibility", impossibility);
  criterion(8, "surface quality at 64x64", surface_quality);
  criterion(9, "Schwarz P assembly at depth 3", assembly);
  criterion(10, "Neovius (2,4,4) reduced solve at d = 1", neovius);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
