#include "tpms/catalog.hpp"

#include <cstdlib>
#include <numeric>

#include "tpms/error.hpp"

namespace tpms {

std::string_view to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Basic: return "basic";
    case FamilyKind::EqualSign: return "equal";
    case FamilyKind::OppositeSign: return "opposite";
    case FamilyKind::Neovius: return "neovius";
    case FamilyKind::Spout: return "spout";
  }
  return "?";
}

std::string Triple::str() const {
  return "(" + std::to_string(r) + "," + std::to_string(s) + "," + std::to_string(t) + ")";
}

bool is_euclidean(const Triple& t) {
  if (t.r < 2 || t.s < 2 || t.t < 2) return false;
  return Rational(1, t.r) + Rational(1, t.s) + Rational(1, t.t) == Rational(1);
}

int complete_triple(int r, int s) {
  if (r < 2 || s < 2) throw Error(ErrorKind::InvalidTriple, "r and s must be at least 2");
  const Rational rest = Rational(1) - Rational(1, r) - Rational(1, s);
  if (!(rest > Rational(0)) || rest.num() != 1)
    throw Error(ErrorKind::InvalidTriple,
                "(" + std::to_string(r) + "," + std::to_string(s) + ") does not extend to a euclidean triangle group");
  return static_cast<int>(rest.den());
}

std::string IntegerConstraint::str() const {
  auto term = [](long long c, const char* var, bool first) {
    std::string out;
    if (c < 0) out += first ? "-" : " - ";
    else if (!first) out += " + ";
    const long long m = std::llabs(c);
    if (m != 1) out += std::to_string(m);
    return out + var;
  };
  return term(cp, "p", true) + term(cq, "Re(q)", false) + " = " + std::to_string(rhs);
}

namespace {

struct BasicRow {
  Triple rst;
  const char* name;
  Rational p;
};

const std::vector<BasicRow>& basic_table() {
  static const std::vector<BasicRow> rows = {
      {{2, 4, 4}, "Schwarz P", {1, 4}},      {{2, 6, 3}, "Schoen H'-T", {1, 3}},
      {{2, 3, 6}, "Schoen H'-T", {1, 6}},    {{3, 3, 3}, "Schwarz H", {1, 4}},
      {{3, 2, 6}, "Schoen H''-R", {1, 8}},   {{3, 6, 2}, "Schoen H''-R", {3, 8}},
      {{4, 4, 2}, "Schoen S'-S''", {1, 3}},  {{4, 2, 4}, "Schoen S'-S''", {1, 6}},
      {{6, 2, 3}, "Schoen T'-R", {1, 5}},    {{6, 3, 2}, "Schoen T'-R", {3, 10}},
  };
  return rows;
}

void require_triple(const Triple& t, const std::vector<Triple>& allowed, const char* family) {
  if (!is_euclidean(t)) throw Error(ErrorKind::InvalidTriple, t.str() + " is not a euclidean triangle group");
  for (const auto& a : allowed)
    if (a == t) return;
  throw Error(ErrorKind::InvalidTriple, t.str() + " is not a " + std::string(family) + " case");
}

}  // namespace

std::vector<Triple> basic_triples() {
  std::vector<Triple> out;
  for (const auto& row : basic_table()) out.push_back(row.rst);
  return out;
}

Rational tabulated_basic_p(const Triple& t) {
  for (const auto& row : basic_table())
    if (row.rst == t) return row.p;
  throw Error(ErrorKind::InvalidTriple, t.str() + " is not a basic case");
}

std::vector<std::pair<int, int>> equal_sign_pairs() { return {{2, 3}, {2, 4}, {3, 6}, {6, 2}}; }
std::vector<std::pair<int, int>> opposite_sign_pairs() { return {{2, 4}, {2, 6}, {2, 3}, {3, 6}, {4, 4}, {3, 3}}; }
std::vector<Triple> neovius_triples() { return {{2, 3, 6}, {2, 4, 4}, {3, 2, 6}, {3, 3, 3}, {4, 2, 4}, {6, 2, 3}}; }
std::vector<Triple> spout_triples() { return basic_triples(); }

FamilySpec basic_family(int r, int s, int t) {
  const Triple tr{r, s, t};
  require_triple(tr, basic_triples(), "basic");
  FamilySpec f;
  f.kind = FamilyKind::Basic;
  f.rst = tr;
  for (const auto& row : basic_table())
    if (row.rst == tr) f.name = row.name;
  f.a = Rational(r - 1, r);
  f.fixed_p = basic_p(r, s);
  f.angle_rhs = -Rational(1, s);
  return f;
}

namespace {

FamilySpec two_pair_family(FamilyKind kind, int r, int s) {
  const auto pairs = kind == FamilyKind::EqualSign ? equal_sign_pairs() : opposite_sign_pairs();
  bool ok = false;
  for (auto [pr, ps] : pairs) ok = ok || (pr == r && ps == s);
  if (!ok)
    throw Error(ErrorKind::InvalidTriple, "(" + std::to_string(r) + "," + std::to_string(s) + ") is not an " +
                                              std::string(to_string(kind)) + "-sign case");
  FamilySpec f;
  f.kind = kind;
  f.rst = {r, s, complete_triple(r, s)};
  f.n = 1;
  f.a = -Rational(r - 1, r);
  if (kind == FamilyKind::EqualSign) {
    f.b = {-Rational(s - 1, s)};
    f.angle_rhs = Rational(1);
    f.name = "equal-sign " + f.rst.str();
  } else {
    f.b = {Rational(s - 1, s)};
    f.angle_rhs = Rational(1, s);
    f.name = "opposite-sign " + f.rst.str();
    if (r == 4 && s == 4) f.name = "Schoen I-WP";
    if (r == 3 && s == 3) f.name = "Karcher T-WP";
  }
  return f;
}

}  // namespace

FamilySpec equal_sign_family(int r, int s) { return two_pair_family(FamilyKind::EqualSign, r, s); }
FamilySpec opposite_sign_family(int r, int s) { return two_pair_family(FamilyKind::OppositeSign, r, s); }

FamilySpec neovius_family(int r, int s, int t) {
  const Triple tr{r, s, t};
  require_triple(tr, neovius_triples(), "Neovius");
  FamilySpec f;
  f.kind = FamilyKind::Neovius;
  f.rst = tr;
  f.n = 2;
  f.a = Rational(1, r) - Rational(1);
  f.b = {Rational(1) - Rational(1, s), Rational(1) - Rational(1, t)};
  f.angle_rhs = -Rational(1, r);
  f.symmetric_reduction = s == t;
  f.qualitative_only = s == 2 || t == 2;
  f.name = tr == Triple{2, 4, 4} ? "Neovius" : "Neovius-type " + tr.str();
  return f;
}

FamilySpec spout_family(int r, int s, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidTriple, "spout count n must be at least 1");
  const Triple tr{r, s, complete_triple(r, s)};
  require_triple(tr, spout_triples(), "spout");
  FamilySpec f;
  f.kind = FamilyKind::Spout;
  f.rst = tr;
  f.n = n;
  f.a = Rational(1 - r, r);
  for (int i = 0; i < n; ++i) f.b.push_back(i % 2 == 0 ? Rational(s - 1, s) : -Rational(s - 1, s));
  f.angle_rhs = Rational(1, s);
  f.name = std::to_string(n) + "-spout " + tr.str();
  return f;
}

IntegerConstraint constraint_of(const FamilySpec& f) {
  if (f.kind != FamilyKind::EqualSign && f.kind != FamilyKind::OppositeSign)
    throw Error(ErrorKind::InvalidArgument, "constraint_of needs an equal- or opposite-sign family");
  // a (2p - 1) + b (2x - 1) = rhs  <=>  2a p + 2b x = rhs + a + b
  const Rational b = f.b.at(0);
  Rational cp = Rational(2) * f.a, cq = Rational(2) * b, rhs = f.angle_rhs + f.a + b;
  const std::int64_t den = std::lcm(std::lcm(cp.den(), cq.den()), rhs.den());
  cp *= den;
  cq *= den;
  rhs *= den;
  std::int64_t g = std::gcd(std::gcd(cp.num(), cq.num()), rhs.num());
  if (cp.num() < 0) g = -g;
  return {cp.num() / g, cq.num() / g, rhs.num() / g};
}

std::optional<std::pair<Rational, Rational>> symmetric_solution(const FamilySpec& f) {
  if (f.kind != FamilyKind::OppositeSign || f.rst.r != f.rst.s) return std::nullopt;
  const Rational gap(1, 2 * (f.rst.r - 1));
  const Rational p = (Rational(1, 2) - gap) / Rational(2);
  return std::make_pair(p, p + gap);
}

int free_dimension(const FamilySpec& f) { return f.kind == FamilyKind::Basic ? 0 : f.n; }

std::vector<double> full_parameters(const FamilySpec& f, const std::vector<double>& free) {
  if (static_cast<int>(free.size()) != free_dimension(f))
    throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(free_dimension(f)) + " free parameters");
  if (f.kind == FamilyKind::Basic) return {f.fixed_p->to_double()};
  std::vector<double> full = free;
  // 2a p + sum 2 b_i q_i = rhs + a + sum b_i, solved for q_n
  double rest = f.angle_rhs.to_double() + f.a.to_double() - 2.0 * f.a.to_double() * free[0];
  for (int i = 0; i < f.n; ++i) rest += f.b[i].to_double();
  for (int i = 0; i + 1 < f.n; ++i) rest -= 2.0 * f.b[i].to_double() * free[i + 1];
  full.push_back(rest / (2.0 * f.b[f.n - 1].to_double()));
  if (!(full[0] > 0.0 && full[0] < 0.5))
    throw Error(ErrorKind::ConstraintInfeasible, "p = " + std::to_string(full[0]) + " outside (0,1/2)");
  double prev = 0.0;
  for (std::size_t i = 1; i < full.size(); ++i) {
    if (!(full[i] > prev && full[i] < 0.5))
      throw Error(ErrorKind::ConstraintInfeasible,
                  "Re(q" + std::to_string(i) + ") = " + std::to_string(full[i]) + " leaves the feasible range");
    prev = full[i];
  }
  return full;
}

SymmetricDivisorSpec family_divisor(const FamilySpec& f, const TorusParams& t, const std::vector<double>& full) {
  if (full.size() != static_cast<std::size_t>(1 + f.n))
    throw Error(ErrorKind::InvalidArgument, "wrong number of family parameters");
  std::vector<Prevertex> upper;
  for (int i = 0; i < f.n; ++i) upper.push_back({full[1 + i], f.b[i]});
  return {t, {{full[0], f.a}}, upper};
}

std::vector<FamilySpec> all_families() {
  std::vector<FamilySpec> out;
  for (const auto& t : basic_triples()) out.push_back(basic_family(t.r, t.s, t.t));
  for (auto [r, s] : equal_sign_pairs()) out.push_back(equal_sign_family(r, s));
  for (auto [r, s] : opposite_sign_pairs()) out.push_back(opposite_sign_family(r, s));
  for (const auto& t : neovius_triples()) out.push_back(neovius_family(t.r, t.s, t.t));
  for (const auto& t : spout_triples()) out.push_back(spout_family(t.r, t.s, 2));
  return out;
}

}  // namespace tpms
