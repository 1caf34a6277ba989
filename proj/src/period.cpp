#include "tpms/period.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "tpms/error.hpp"
#include "tpms/weierstrass.hpp"

namespace tpms {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double plane_offset(const GaussMap& g, IntegralCache& cache, cplx za, cplx zb) {
  const cplx fa = horizontal_projection(cache.at(g, za));
  const cplx fb = horizontal_projection(cache.at(g, zb));
  const double psi = g.log_value(za).imag();
  return (std::exp(cplx(0.0, -psi)) * (fb - fa)).imag();
}

double pairing_parallelism(const GaussMap& g, const PlanePairing& pr) {
  const double diff = g.log_value(pr.zb).imag() - g.log_value(pr.za).imag();
  return std::abs(std::remainder(diff, kPi));
}

std::vector<PlanePairing> pairings(const FamilySpec& f, const std::vector<double>& full, const TorusParams& t) {
  const double h = t.strip_height();
  const cplx lower_mid(0.0, 0.0), upper_mid(0.0, h);
  switch (f.kind) {
    case FamilyKind::Basic:
      return {};
    case FamilyKind::EqualSign:
      return {{lower_mid, upper_mid, "[-p,p] vs [-q,q]"}};
    case FamilyKind::OppositeSign:
      return {{lower_mid, cplx(0.5, h), "[-p,p] vs [q,1-q]"}};
    case FamilyKind::Neovius:
      return {{cplx(0.5, 0.0), upper_mid, "[p,1-p] vs [-q1,q1]"}, {lower_mid, cplx(0.5, h), "[-p,p] vs [q2,1-q2]"}};
    case FamilyKind::Spout: {
      std::vector<PlanePairing> out;
      for (int k = 1; k <= f.n; ++k) {
        const double lo = full[k];
        const double hi = k < f.n ? full[k + 1] : 1.0 - full[k];
        const cplx zb(0.5 * (lo + hi), h);
        const std::string seg = "[q" + std::to_string(k) + "," + (k < f.n ? "q" + std::to_string(k + 1) : "1-q" + std::to_string(k)) + "]";
        if (k % 2 == 1) out.push_back({lower_mid, zb, "[-p,p] vs " + seg});
        else out.push_back({upper_mid, zb, "[-q1,q1] vs " + seg});
      }
      return out;
    }
  }
  return {};
}

std::vector<double> period_residual(const FamilySpec& f, const TorusParams& t, const std::vector<double>& free,
                                    const QuadratureOptions& quad) {
  const auto full = full_parameters(f, free);
  const GaussMap g(expand(family_divisor(f, t, full)));
  IntegralCache cache(quad);
  std::vector<double> r;
  for (const auto& pr : pairings(f, full, t)) r.push_back(plane_offset(g, cache, pr.za, pr.zb));
  return r;
}

double residual_equal_sign(double p, const FamilySpec& f, const TorusParams& t, const QuadratureOptions& quad) {
  if (f.kind != FamilyKind::EqualSign) throw Error(ErrorKind::InvalidArgument, "not an equal-sign family");
  return period_residual(f, t, {p}, quad).at(0);
}

double residual_opposite_sign(double p, const FamilySpec& f, const TorusParams& t, const QuadratureOptions& quad) {
  if (f.kind != FamilyKind::OppositeSign) throw Error(ErrorKind::InvalidArgument, "not an opposite-sign family");
  return period_residual(f, t, {p}, quad).at(0);
}

std::pair<double, double> feasible_interval(const FamilySpec& f) {
  if (f.n != 1 || f.kind == FamilyKind::Basic)
    throw Error(ErrorKind::InvalidArgument, "feasible_interval needs a one-parameter family");
  // x(p) = (rhs + a + b - 2 a p) / (2 b), required in (0, 1/2)
  const double a = f.a.to_double(), b = f.b[0].to_double();
  const double c0 = (f.angle_rhs.to_double() + a + b) / (2.0 * b), c1 = -a / b;
  double lo = 0.0, hi = 0.5;
  const double at0 = -c0 / c1, at_half = (0.5 - c0) / c1;
  if (c1 > 0.0) {
    lo = std::max(lo, at0);
    hi = std::min(hi, at_half);
  } else {
    lo = std::max(lo, at_half);
    hi = std::min(hi, at0);
  }
  if (!(lo < hi)) throw Error(ErrorKind::ConstraintInfeasible, "empty feasible interval for " + f.name);
  return {lo, hi};
}

Scan1D scan_1d(const FamilySpec& f, const TorusParams& t, int samples, const QuadratureOptions& quad) {
  const auto [lo, hi] = feasible_interval(f);
  Scan1D out;
  out.points.resize(samples);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < samples; ++k) {
    const double p = lo + (hi - lo) * (k + 0.5) / samples;
    ScanPoint& sp = out.points[k];
    sp.params = {p};
    try {
      sp.residual = period_residual(f, t, {p}, quad).at(0);
    } catch (const Error& e) {
      sp.residual = std::numeric_limits<double>::quiet_NaN();
      sp.reason = e.what();
    }
  }
  for (int k = 0; k + 1 < samples; ++k) {
    const double r0 = out.points[k].residual, r1 = out.points[k + 1].residual;
    if (std::isfinite(r0) && std::isfinite(r1) && sgn(r0) * sgn(r1) <= 0.0 && !(r0 == 0.0 && r1 == 0.0))
      out.brackets.emplace_back(out.points[k].params[0], out.points[k + 1].params[0]);
  }
  return out;
}

namespace {

RootResult bisect(const FamilySpec& f, const TorusParams& t, double x0, double x1, const SolveOptions& opt) {
  auto F = [&](double p) { return period_residual(f, t, {p}, opt.quad).at(0); };
  double f0 = F(x0), f1 = F(x1);
  RootResult res;
  int it = 0;
  while (x1 - x0 > opt.bracket_width && f0 != 0.0 && f1 != 0.0) {
    const double m = 0.5 * (x0 + x1);
    if (m <= x0 || m >= x1) break;
    const double fm = F(m);
    ++it;
    if (sgn(fm) == sgn(f0)) {
      x0 = m;
      f0 = fm;
    } else {
      x1 = m;
      f1 = fm;
    }
  }
  const bool left = std::abs(f0) <= std::abs(f1);
  res.free = {left ? x0 : x1};
  res.full = full_parameters(f, res.free);
  res.residual = {left ? f0 : f1};
  res.iterations = it;
  return res;
}

}  // namespace

namespace {

RootResult solve_from_scan(const FamilySpec& f, const TorusParams& t, const Scan1D& scan, const SolveOptions& opt) {
  if (scan.brackets.empty())
    throw Error(ErrorKind::NoSignChange, "no sign change of the period residual for " + f.name + " at d = " +
                                             std::to_string(t.d()));
  RootResult res = bisect(f, t, scan.brackets[0].first, scan.brackets[0].second, opt);
  res.other_brackets.assign(scan.brackets.begin() + 1, scan.brackets.end());
  for (const auto& b : res.other_brackets)
    res.log.push_back("further sign change in [" + std::to_string(b.first) + ", " + std::to_string(b.second) + "]");
  return res;
}

}  // namespace

RootResult solve_1d(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt) {
  return solve_from_scan(f, t, scan_1d(f, t, opt.samples, opt.quad), opt);
}

RootResult solve_equal_sign(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt) {
  if (f.kind != FamilyKind::EqualSign) throw Error(ErrorKind::InvalidArgument, "not an equal-sign family");
  const Scan1D scan = scan_1d(f, t, opt.samples, opt.quad);
  const double first = scan.points.front().residual, last = scan.points.back().residual;
  if (!(sgn(first) * sgn(last) < 0.0))
    throw Error(ErrorKind::NoSignChange, "residual end signs agree for " + f.name + " at d = " + std::to_string(t.d()));
  return solve_from_scan(f, t, scan, opt);
}

RootResult solve_opposite_sign(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt) {
  if (f.kind != FamilyKind::OppositeSign) throw Error(ErrorKind::InvalidArgument, "not an opposite-sign family");
  const auto closed = symmetric_solution(f);
  if (!closed) return solve_1d(f, t, opt);
  const double pc = closed->first.to_double();
  const double rc = period_residual(f, t, {pc}, opt.quad).at(0);
  const Scan1D scan = scan_1d(f, t, opt.samples, opt.quad);
  RootResult res;
  if (!scan.brackets.empty()) {
    // prefer the bracket holding the closed form
    auto pick = scan.brackets[0];
    for (const auto& b : scan.brackets)
      if (b.first <= pc && pc <= b.second) pick = b;
    res = bisect(f, t, pick.first, pick.second, opt);
    res.log.push_back("closed-form p = " + closed->first.str() + ", |scan root - closed form| = " +
                      std::to_string(std::abs(res.free[0] - pc)));
    return res;
  }
  if (!(std::abs(rc) < 1e-8))
    throw Error(ErrorKind::NoSignChange, "no sign change and closed-form residual " + std::to_string(rc));
  res.free = {pc};
  res.full = full_parameters(f, res.free);
  res.residual = {rc};
  res.closed_form = true;
  res.log.push_back("residual has no sign change along the constraint line; closed form verified");
  return res;
}

std::vector<double> initial_guess(const FamilySpec& f) {
  switch (f.kind) {
    case FamilyKind::Basic:
      return {};
    case FamilyKind::EqualSign:
    case FamilyKind::OppositeSign: {
      const auto [lo, hi] = feasible_interval(f);
      return {0.5 * (lo + hi)};
    }
    case FamilyKind::Neovius:
      if (f.symmetric_reduction) return {0.25, 0.125};
      [[fallthrough]];
    case FamilyKind::Spout: {
      // search a grid of p and evenly spread q's for a feasible point
      for (int k = 1; k < 40; ++k) {
        const double p = 0.5 * k / 40.0;
        for (int m = 1; m < 40; ++m) {
          const double step = 0.5 * m / 40.0 / f.n;
          std::vector<double> x{p};
          for (int i = 1; i < f.n; ++i) x.push_back(step * i);
          try {
            full_parameters(f, x);
            return x;
          } catch (const Error&) {
          }
        }
      }
      throw Error(ErrorKind::ConstraintInfeasible, "no feasible starting point for " + f.name);
    }
  }
  return {};
}

std::vector<double> grid_seed(const FamilySpec& f, const TorusParams& t, int samples, const QuadratureOptions& quad) {
  const int n = free_dimension(f);
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "grid_seed needs free parameters");
  long long cells = 1;
  for (int k = 0; k < n; ++k) cells *= samples;
  std::vector<double> norms(cells, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < cells; ++c) {
    std::vector<double> x(n);
    long long rest = c;
    for (int k = 0; k < n; ++k) {
      x[k] = 0.5 * (static_cast<double>(rest % samples) + 0.5) / samples;
      rest /= samples;
    }
    try {
      norms[c] = max_abs(period_residual(f, t, x, quad));
    } catch (const Error&) {
    }
  }
  const long long best = std::min_element(norms.begin(), norms.end()) - norms.begin();
  if (!std::isfinite(norms[best]))
    throw Error(ErrorKind::ConstraintInfeasible, "no feasible grid point for " + f.name);
  std::vector<double> x(n);
  long long rest = best;
  for (int k = 0; k < n; ++k) {
    x[k] = 0.5 * (static_cast<double>(rest % samples) + 0.5) / samples;
    rest /= samples;
  }
  return x;
}

RootResult solve_multidim(const FamilySpec& f, const TorusParams& t, std::vector<double> x,
                          const SolveOptions& opt) {
  const int n = free_dimension(f);
  if (static_cast<int>(x.size()) != n) throw Error(ErrorKind::InvalidArgument, "initial guess has wrong dimension");
  auto F = [&](const std::vector<double>& v) { return period_residual(f, t, v, opt.quad); };
  // infeasible or unintegrable trial points count as rejected
  auto try_eval = [&](const std::vector<double>& v, std::vector<double>& out) {
    try {
      out = F(v);
      return true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ConstraintInfeasible && e.kind() != ErrorKind::QuadratureNonConvergence &&
          e.kind() != ErrorKind::OverlappingPoints)
        throw;
      return false;
    }
  };
  std::vector<double> r = F(x);
  RootResult res;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (max_abs(r) < opt.tol) {
      res.free = x;
      res.full = full_parameters(f, x);
      res.residual = r;
      res.iterations = it;
      return res;
    }
    Eigen::MatrixXd J(n, n);
    for (int k = 0; k < n; ++k) {
      const double hstep = opt.fd_step * std::max(std::abs(x[k]), 0.1);
      auto xp = x, xm = x;
      xp[k] += hstep;
      xm[k] -= hstep;
      // one-sided next to the feasible boundary
      std::vector<double> rp, rm;
      double span = 2.0 * hstep;
      if (!try_eval(xp, rp)) {
        rp = r;
        span = hstep;
      }
      if (!try_eval(xm, rm)) {
        if (span == hstep) throw Error(ErrorKind::NonConvergence, "Jacobian probe failed on both sides");
        rm = r;
        span = hstep;
      }
      for (int i = 0; i < n; ++i) J(i, k) = (rp[i] - rm[i]) / span;
    }
    Eigen::VectorXd rv(n);
    for (int i = 0; i < n; ++i) rv[i] = r[i];
    const Eigen::VectorXd dx = -J.colPivHouseholderQr().solve(rv);
    double lambda = 1.0;
    bool accepted = false;
    for (int hv = 0; hv <= opt.max_halvings; ++hv, lambda *= 0.5) {
      std::vector<double> xn = x;
      for (int k = 0; k < n; ++k) xn[k] += lambda * dx[k];
      std::vector<double> rn;
      if (try_eval(xn, rn) && max_abs(rn) < max_abs(r)) {
        x = xn;
        r = rn;
        accepted = true;
        break;
      }
    }
    res.log.push_back("iteration " + std::to_string(it) + ": |r| = " + std::to_string(max_abs(r)) +
                      ", step scale " + std::to_string(lambda));
    if (!accepted) break;
  }
  if (max_abs(r) < opt.tol) {
    res.free = x;
    res.full = full_parameters(f, x);
    res.residual = r;
    res.iterations = opt.max_iterations;
    return res;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "Newton stalled for %s with |residual| = %.3e", f.name.c_str(), max_abs(r));
  throw Error(ErrorKind::NonConvergence, buf);
}

std::vector<double> neovius_reduced_residual(const FamilySpec& f, const TorusParams& t, double q1,
                                             const QuadratureOptions& quad) {
  if (f.kind != FamilyKind::Neovius || !f.symmetric_reduction)
    throw Error(ErrorKind::InvalidArgument, "symmetric reduction needs a Neovius family with s = t");
  return period_residual(f, t, {0.25, q1}, quad);
}

RootResult solve_neovius_reduced(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt) {
  // q1 in (0, 1/4) keeps q1 < q2 = 1/2 - q1; the first residual component is
  // the non-trivial one under the reduction
  auto F = [&](double q1) { return neovius_reduced_residual(f, t, q1, opt.quad); };
  const int N = opt.samples;
  std::vector<double> qs(N), rs(N);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < N; ++k) {
    qs[k] = 0.25 * (k + 0.5) / N;
    try {
      rs[k] = F(qs[k]).at(0);
    } catch (const Error&) {
      rs[k] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  int kb = -1;
  for (int k = 0; k + 1 < N; ++k)
    if (std::isfinite(rs[k]) && std::isfinite(rs[k + 1]) && sgn(rs[k]) * sgn(rs[k + 1]) <= 0.0) {
      kb = k;
      break;
    }
  if (kb < 0) throw Error(ErrorKind::NoSignChange, "no sign change in the reduced Neovius residual");
  double x0 = qs[kb], x1 = qs[kb + 1], f0 = rs[kb];
  RootResult res;
  while (x1 - x0 > opt.bracket_width) {
    const double m = 0.5 * (x0 + x1);
    if (m <= x0 || m >= x1) break;
    const double fm = F(m).at(0);
    ++res.iterations;
    if (fm == 0.0) {
      x0 = x1 = m;
      break;
    }
    if (sgn(fm) == sgn(f0)) {
      x0 = m;
      f0 = fm;
    } else {
      x1 = m;
    }
  }
  res.free = {0.25, 0.5 * (x0 + x1)};
  res.full = full_parameters(f, res.free);
  res.residual = F(res.free[1]);
  return res;
}

// --- four corners on one edge ---

FourCornerCandidate four_corner_candidate(const Triple& rst) {
  if (!is_euclidean(rst)) throw Error(ErrorKind::InvalidTriple, rst.str() + " is not a euclidean triangle group");
  return {rst, Rational(1) - Rational(1, rst.r), Rational(1) - Rational(1, rst.s)};
}

double FourCornerCandidate::q_of(double p) const {
  const double A = a.to_double(), B = b.to_double();
  return (A + B - 1.0 - 2.0 * A * p) / (2.0 * B);
}

std::pair<double, double> FourCornerCandidate::p_range() const {
  // need 0 < p < q(p) < 1/2 with q decreasing in p
  const double A = a.to_double(), B = b.to_double();
  const double c0 = (A + B - 1.0) / (2.0 * B), c1 = -A / B;
  const double hi = c0 / (1.0 - c1);   // q(p) = p
  const double lo = std::max(0.0, (0.5 - c0) / c1);  // q(p) = 1/2
  if (!(lo < hi)) throw Error(ErrorKind::ConstraintInfeasible, "empty parameter range for " + rst.str());
  return {lo, hi};
}

SymmetricDivisorSpec FourCornerCandidate::divisor(double p, const TorusParams& t) const {
  const double q = q_of(p);
  if (!(p > 0.0 && p < q && q < 0.5))
    throw Error(ErrorKind::ConstraintInfeasible, "four-corner parameters outside 0 < p < q < 1/2");
  return {t, {{p, a}, {q, b}}, {}};
}

double four_corner_residual(const FourCornerCandidate& c, double p, const TorusParams& t,
                            const QuadratureOptions& quad) {
  const GaussMap g(expand(c.divisor(p, t)));
  IntegralCache cache(quad);
  return plane_offset(g, cache, cplx(0.0, 0.0), cplx(0.0, t.strip_height()));
}

double doubled_cover_residual(double p, const Rational& a, const TorusParams& t, const QuadratureOptions& quad) {
  std::vector<Prevertex> lower{{p, a}, {0.5 - p, -a}};
  if (p > 0.25) std::swap(lower[0], lower[1]);
  const SymmetricDivisorSpec s(t, lower, {});
  const GaussMap g(expand(s));
  IntegralCache cache(quad);
  return plane_offset(g, cache, cplx(0.0, 0.0), cplx(0.5, 0.0));
}

ImpossibilityReport impossibility_scan(const Triple& rst, const std::vector<double>& ds, int grid,
                                       const QuadratureOptions& quad) {
  const FourCornerCandidate c = four_corner_candidate(rst);
  const auto [lo, hi] = c.p_range();
  ImpossibilityReport rep{rst, {}, false, true};
  for (double d : ds) {
    const TorusParams t(d);
    ImpossibilityRow row{d, std::vector<double>(grid), std::vector<double>(grid), true, 0.0};
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < grid; ++k) {
      row.ps[k] = lo + (hi - lo) * (k + 0.5) / grid;
      row.residuals[k] = four_corner_residual(c, row.ps[k], t, quad);
    }
    row.inf_abs = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid; ++k) {
      row.constant_sign = row.constant_sign && sgn(row.residuals[k]) == sgn(row.residuals[0]) && row.residuals[k] != 0.0;
      row.inf_abs = std::min(row.inf_abs, std::abs(row.residuals[k]));
    }
    rep.sign_change_found = rep.sign_change_found || !row.constant_sign;
    rep.rows.push_back(std::move(row));
  }
  auto sorted = rep.rows;
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.d > y.d; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    rep.inf_decreasing = rep.inf_decreasing && sorted[i].inf_abs < sorted[i - 1].inf_abs;
  return rep;
}

}  // namespace tpms
