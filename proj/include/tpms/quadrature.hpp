#pragma once

// Adaptive quadrature of complex integrands along straight segments whose
// endpoints may carry algebraic singularities f(z) ~ (z - A)^e h(z), e > -1,
// h analytic. Panels touching a singular endpoint use Gauss-Jacobi rules with
// the exact weight s^e; all other panels use Gauss-Legendre. Each panel is
// accepted when the n-point and 2n-point estimates agree, otherwise it is
// bisected.

#include <array>
#include <cstdio>
#include <cmath>
#include <complex>
#include <vector>

#include "tpms/error.hpp"

namespace tpms {

using cplx = std::complex<double>;

struct QuadratureOptions {
  int order = 12;           // n; panels compare n against 2n nodes
  double abs_tol = 1e-14;   // per unit parameter length
  double rel_tol = 1e-13;
  int max_depth = 48;
};

/// Nodes and weights of the n-point Gauss rule on [0,1] for the weight s^beta
/// (beta > -1; beta = 0 gives Gauss-Legendre). Cached, thread-safe.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_jacobi_rule(int n, double beta);
inline const GaussRule& gauss_legendre_rule(int n) { return gauss_jacobi_rule(n, 0.0); }

struct EndpointBehavior {
  bool singular = false;
  double exponent = 0.0;  // f ~ (z - endpoint)^exponent
};

namespace detail {

template <std::size_t K>
using Values = std::array<cplx, K>;

template <std::size_t K>
double norm_inf(const Values<K>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Panel {
  double s0, s1;  // parameter range in [0,1]
  int depth;
};

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace detail

/// Integrates f(z) dz along [a, b]. The callback receives (z, z - a, z - b),
/// with the offsets computed without cancellation so that factors singular at
/// an endpoint can be evaluated to full relative accuracy, and returns K
/// complex values (integrated componentwise). `ends_a[k]` / `ends_b[k]`
/// describe component k's behaviour at each endpoint.
template <std::size_t K, class F>
std::array<cplx, K> integrate_segment(F&& f, cplx a, cplx b, const std::array<EndpointBehavior, K>& ends_a,
                                      const std::array<EndpointBehavior, K>& ends_b,
                                      const QuadratureOptions& opt = {}) {
  using detail::Values;
  const cplx h = b - a;
  bool sing_a = false, sing_b = false;
  for (std::size_t k = 0; k < K; ++k) {
    sing_a = sing_a || ends_a[k].singular;
    sing_b = sing_b || ends_b[k].singular;
  }

  // Evaluate at parameter measured from a (from_a=true) or from b.
  auto eval = [&](double dist, bool from_a) {
    if (from_a) {
      const cplx da = dist * h;
      return f(a + da, da, (a + da) - b);
    }
    const cplx db = -dist * h;
    return f(b + db, (b + db) - a, db);
  };

  // Panel estimate with an n-point rule family. For panels touching a
  // singular endpoint each component gets its own Jacobi weight.
  auto panel_estimate = [&](double s0, double s1, int n) {
    Values<K> out{};
    const double len = s1 - s0;
    const bool left_sing = sing_a && s0 == 0.0;
    const bool right_sing = sing_b && s1 == 1.0;
    if (!left_sing && !right_sing) {
      const GaussRule& g = gauss_legendre_rule(n);
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double s = s0 + len * g.nodes[i];
        const bool near_b = s > 0.5;
        const Values<K> v = near_b ? eval(1.0 - s, false) : eval(s, true);
        for (std::size_t k = 0; k < K; ++k) out[k] += g.weights[i] * v[k];
      }
    } else {
      const auto& ends = left_sing ? ends_a : ends_b;
      for (std::size_t k = 0; k < K; ++k) {
        const double e = ends[k].singular ? ends[k].exponent : 0.0;
        const GaussRule& g = gauss_jacobi_rule(n, e);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
          // local distance from the singular endpoint, in parameter units
          const double u = len * g.nodes[i];
          const Values<K> v = left_sing ? eval(u, true) : eval(u, false);
          // f = u^e * smooth; the rule integrates against (u/len)^e
          acc += g.weights[i] * v[k] / std::pow(g.nodes[i], e);
        }
        out[k] = acc;
      }
    }
    for (auto& x : out) x *= len * h;
    return out;
  };

  Values<K> total{};
  std::vector<detail::Panel> stack;
  if (sing_a && sing_b) {
    stack.push_back({0.5, 1.0, 1});
    stack.push_back({0.0, 0.5, 1});
  } else {
    stack.push_back({0.0, 1.0, 0});
  }
  int panels = 0;
  while (!stack.empty()) {
    const detail::Panel p = stack.back();
    stack.pop_back();
    const Values<K> coarse = panel_estimate(p.s0, p.s1, opt.order);
    const Values<K> fine = panel_estimate(p.s0, p.s1, 2 * opt.order);
    Values<K> diff;
    for (std::size_t k = 0; k < K; ++k) diff[k] = fine[k] - coarse[k];
    const double err = detail::norm_inf<K>(diff);
    const double scale = detail::norm_inf<K>(fine);
    const double allowed = opt.abs_tol * (p.s1 - p.s0) * std::abs(h) + opt.rel_tol * scale;
    if (err <= allowed || !std::isfinite(err)) {
      if (!std::isfinite(err))
        throw Error(ErrorKind::QuadratureNonConvergence, "non-finite integrand value on segment");
      for (std::size_t k = 0; k < K; ++k) total[k] += fine[k];
      continue;
    }
    if (p.depth >= opt.max_depth || ++panels > 20000)
      throw Error(ErrorKind::QuadratureNonConvergence,
                  "panel refinement exhausted (estimate difference " + detail::sci(err) + ")");
    const double mid = 0.5 * (p.s0 + p.s1);
    stack.push_back({mid, p.s1, p.depth + 1});
    stack.push_back({p.s0, mid, p.depth + 1});
  }
  return total;
}

}  // namespace tpms
