#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpms/divisor.hpp"

namespace tpms {

enum class FamilyKind { Basic, EqualSign, OppositeSign, Neovius, Spout };
std::string_view to_string(FamilyKind k);

struct Triple {
  int r = 0, s = 0, t = 0;
  friend bool operator==(const Triple&, const Triple&) = default;
  std::string str() const;
};

/// 1/r + 1/s + 1/t == 1 in exact arithmetic.
bool is_euclidean(const Triple& t);
/// The t completing (r, s) to a Euclidean triple. Throws InvalidTriple.
int complete_triple(int r, int s);

/// Integer linear relation cp * p + cq * Re(q) = rhs, coprime, cp > 0.
struct IntegerConstraint {
  long long cp = 0, cq = 0, rhs = 0;
  friend bool operator==(const IntegerConstraint&, const IntegerConstraint&) = default;
  std::string str() const;
};

/// A family of symmetric divisors. Half data: one lower point p with exponent
/// `a`, upper points q_1 < ... < q_n with exponents `b`. The plane-angle
/// relation a (2p - 1) + sum b_i (2 q_i - 1) = angle_rhs eliminates the last
/// upper point.
struct FamilySpec {
  FamilyKind kind = FamilyKind::Basic;
  Triple rst;
  int n = 0;  // number of upper half points
  std::string name;
  double default_d = 1.0;
  Rational a;
  std::vector<Rational> b;
  Rational angle_rhs;
  std::optional<Rational> fixed_p;  // basic family
  bool symmetric_reduction = false;
  bool qualitative_only = false;  // figure-level agreement only
};

FamilySpec basic_family(int r, int s, int t);
FamilySpec equal_sign_family(int r, int s);
FamilySpec opposite_sign_family(int r, int s);
FamilySpec neovius_family(int r, int s, int t);
FamilySpec spout_family(int r, int s, int n);

/// Derived from the plane-angle relation. Requires EqualSign or OppositeSign.
IntegerConstraint constraint_of(const FamilySpec& f);

/// Closed-form symmetric solution for r = s opposite-sign families:
/// Re(q) - p = 1/(2(r-1)) together with p + Re(q) = 1/2.
std::optional<std::pair<Rational, Rational>> symmetric_solution(const FamilySpec& f);

/// Number of free parameters after eliminating the last upper point.
int free_dimension(const FamilySpec& f);

/// Full half data (p, q_1, ..., q_n) from the free parameters. Throws
/// ConstraintInfeasible when the eliminated point leaves (0, 1/2) or the
/// ordering 0 < q_1 < ... < q_n < 1/2 breaks.
std::vector<double> full_parameters(const FamilySpec& f, const std::vector<double>& free);

/// The symmetric divisor for full parameters (p, q_1, ..., q_n).
SymmetricDivisorSpec family_divisor(const FamilySpec& f, const TorusParams& t, const std::vector<double>& full);

/// Rows of the known tables.
std::vector<Triple> basic_triples();
/// Tabulated p of a basic row (independent of the basic_p formula).
Rational tabulated_basic_p(const Triple& t);
std::vector<std::pair<int, int>> equal_sign_pairs();
std::vector<std::pair<int, int>> opposite_sign_pairs();
std::vector<Triple> neovius_triples();
/// (r, s, t) with distinct spout configurations for n = 2.
std::vector<Triple> spout_triples();

std::vector<FamilySpec> all_families();

}  // namespace tpms
