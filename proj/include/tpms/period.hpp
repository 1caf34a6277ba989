#pragma once

// Period residuals. Every residual component is the signed distance between
// two parallel vertical symmetry planes of the patch, measured in the
// horizontal projection F at the parameter midpoints of the two boundary
// segments: Im( e^{-i psi} (F(zB) - F(zA)) ), psi = arg G on segment A.
// A component vanishes exactly when the two planes coincide.

#include <optional>
#include <string>
#include <vector>

#include "tpms/catalog.hpp"
#include "tpms/scmap.hpp"

namespace tpms {

/// Pair of boundary segments whose planes must coincide, given by parameter
/// points on them (window coordinates, not pre-vertices).
struct PlanePairing {
  cplx za, zb;
  std::string what;
};

/// Signed offset of the plane through zb from the plane through za.
double plane_offset(const GaussMap& g, IntegralCache& cache, cplx za, cplx zb);

/// Direction mismatch (radians, modulo pi) between the two planes of a
/// pairing; zero when the angle constraint holds.
double pairing_parallelism(const GaussMap& g, const PlanePairing& pr);

std::vector<PlanePairing> pairings(const FamilySpec& f, const std::vector<double>& full, const TorusParams& t);

/// Residual vector (dimension free_dimension(f)) at free parameters.
std::vector<double> period_residual(const FamilySpec& f, const TorusParams& t, const std::vector<double>& free,
                                    const QuadratureOptions& quad = {});

double residual_equal_sign(double p, const FamilySpec& f, const TorusParams& t, const QuadratureOptions& quad = {});
double residual_opposite_sign(double p, const FamilySpec& f, const TorusParams& t,
                              const QuadratureOptions& quad = {});

/// Open interval of p on which the eliminated Re(q) stays inside (0, 1/2).
std::pair<double, double> feasible_interval(const FamilySpec& f);

struct ScanPoint {
  std::vector<double> params;
  double residual;  // NaN when the evaluation failed
  std::string reason;
};

struct Scan1D {
  std::vector<ScanPoint> points;
  std::vector<std::pair<double, double>> brackets;  // every sign change
};

/// Uniform scan at the cell midpoints of the feasible interval.
Scan1D scan_1d(const FamilySpec& f, const TorusParams& t, int samples = 64, const QuadratureOptions& quad = {});

struct RootResult {
  std::vector<double> free;
  std::vector<double> full;
  std::vector<double> residual;
  int iterations = 0;
  bool closed_form = false;
  std::vector<std::pair<double, double>> other_brackets;
  std::vector<std::string> log;
};

struct SolveOptions {
  QuadratureOptions quad{};
  int samples = 64;
  double bracket_width = 1e-13;
  double tol = 1e-10;       // Newton stopping rule on the max norm
  int max_iterations = 50;
  double fd_step = 1e-6;    // relative central-difference step
  int max_halvings = 20;
};

/// Scan then bisection. Throws NoSignChange when the scan finds none.
RootResult solve_1d(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt = {});
RootResult solve_equal_sign(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt = {});
/// For r = s also checks the scan root against the closed-form solution; if
/// the residual has no sign change there the closed form is returned after
/// verification.
RootResult solve_opposite_sign(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt = {});

/// Damped Newton with a central-difference Jacobian. Throws NonConvergence.
RootResult solve_multidim(const FamilySpec& f, const TorusParams& t, std::vector<double> x0,
                          const SolveOptions& opt = {});

/// Starting point from the symmetric reduction (p = 1/4, q1 + q2 = 1/2) or the
/// first feasible point of a coarse grid.
std::vector<double> initial_guess(const FamilySpec& f);

/// Feasible cell midpoint of a uniform grid over (0, 1/2)^n with the smallest
/// max-norm residual.
std::vector<double> grid_seed(const FamilySpec& f, const TorusParams& t, int samples = 12,
                              const QuadratureOptions& quad = {});

/// Neovius cases with s = t: p = 1/4 and q2 = 1/2 - q1 leave q1 free.
std::vector<double> neovius_reduced_residual(const FamilySpec& f, const TorusParams& t, double q1,
                                             const QuadratureOptions& quad = {});
RootResult solve_neovius_reduced(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt = {});

// --- four corners on one edge ---

/// Half lower data (p, a), (q, b) with a = 1 - 1/r, b = 1 - 1/s: signs
/// (-,-,+,+) on (-q, -p, p, q), no upper corners. The angle relation
/// 2(ap + bq) = a + b - 1 fixes q.
struct FourCornerCandidate {
  Triple rst;
  Rational a, b;
  std::pair<double, double> p_range() const;
  double q_of(double p) const;
  SymmetricDivisorSpec divisor(double p, const TorusParams& t) const;
};
FourCornerCandidate four_corner_candidate(const Triple& rst);

/// Offset between the planes over [-p, p] and the upper edge.
double four_corner_residual(const FourCornerCandidate& c, double p, const TorusParams& t,
                            const QuadratureOptions& quad = {});

/// Double cover of a basic example: q = 1/2 - p, b = -a. Offset between the
/// planes over [-p, p] and [q, 1 - q].
double doubled_cover_residual(double p, const Rational& a, const TorusParams& t, const QuadratureOptions& quad = {});

struct ImpossibilityRow {
  double d;
  std::vector<double> ps, residuals;
  bool constant_sign;
  double inf_abs;
};
struct ImpossibilityReport {
  Triple rst;
  std::vector<ImpossibilityRow> rows;
  bool sign_change_found;     // a sign change somewhere
  bool inf_decreasing;        // inf |residual| decreases with d
};
ImpossibilityReport impossibility_scan(const Triple& rst, const std::vector<double>& ds, int grid,
                                       const QuadratureOptions& quad = {});

}  // namespace tpms
