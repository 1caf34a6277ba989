#include "doctest.h"
#include "tpms/catalog.hpp"
#include "tpms/error.hpp"

using namespace tpms;

TEST_CASE("euclidean triples") {
  CHECK(is_euclidean({2, 4, 4}));
  CHECK(is_euclidean({3, 3, 3}));
  CHECK(is_euclidean({6, 3, 2}));
  CHECK_FALSE(is_euclidean({2, 3, 5}));
  CHECK(complete_triple(2, 4) == 4);
  CHECK(complete_triple(3, 6) == 2);
  CHECK(complete_triple(6, 2) == 3);
  CHECK_THROWS_AS(complete_triple(2, 5), Error);
  CHECK_THROWS_AS(complete_triple(2, 2), Error);
}

TEST_CASE("basic table: formula equals tabulated p for all rows") {
  // oracle values typed from the published table
  const std::vector<std::pair<Triple, Rational>> table = {
      {{2, 4, 4}, {1, 4}}, {{2, 6, 3}, {1, 3}}, {{2, 3, 6}, {1, 6}}, {{3, 3, 3}, {1, 4}}, {{3, 2, 6}, {1, 8}},
      {{3, 6, 2}, {3, 8}}, {{4, 4, 2}, {1, 3}}, {{4, 2, 4}, {1, 6}}, {{6, 2, 3}, {1, 5}}, {{6, 3, 2}, {3, 10}},
  };
  REQUIRE(basic_triples().size() == table.size());
  for (const auto& [t, p] : table) {
    CHECK(basic_p(t.r, t.s) == p);
    CHECK(tabulated_basic_p(t) == p);
    const FamilySpec f = basic_family(t.r, t.s, t.t);
    CHECK(*f.fixed_p == p);
    CHECK(f.a == Rational(t.r - 1, t.r));
  }
  CHECK(basic_family(2, 4, 4).name == "Schwarz P");
  CHECK(basic_family(3, 3, 3).name == "Schwarz H");
  CHECK_THROWS_AS(basic_family(2, 4, 5), Error);
}

TEST_CASE("integer constraints reproduce the tables") {
  struct Row {
    bool equal;
    int r, s;
    IntegerConstraint c;
  };
  const std::vector<Row> rows = {
      {true, 2, 3, {6, 8, 1}},    {true, 2, 4, {4, 6, 1}},      {true, 3, 6, {8, 10, 3}},   {true, 6, 2, {5, 3, 1}},
      {false, 2, 4, {2, -3, -1}}, {false, 2, 6, {6, -10, -3}},  {false, 2, 3, {6, -8, -3}}, {false, 3, 6, {4, -5, -1}},
  };
  for (const auto& row : rows) {
    const FamilySpec f = row.equal ? equal_sign_family(row.r, row.s) : opposite_sign_family(row.r, row.s);
    CHECK(constraint_of(f) == row.c);
  }
  CHECK(constraint_of(equal_sign_family(2, 3)).str() == "6p + 8Re(q) = 1");
  CHECK(constraint_of(opposite_sign_family(2, 4)).str() == "2p - 3Re(q) = -1");
}

TEST_CASE("r = s closed forms") {
  // I-WP: 6p = 3Re(q) = 1, T-WP: 24p = 8Re(q) = 3
  const auto iwp = symmetric_solution(opposite_sign_family(4, 4));
  REQUIRE(iwp);
  CHECK(Rational(6) * iwp->first == Rational(1));
  CHECK(Rational(3) * iwp->second == Rational(1));
  const auto twp = symmetric_solution(opposite_sign_family(3, 3));
  REQUIRE(twp);
  CHECK(Rational(24) * twp->first == Rational(3));
  CHECK(Rational(8) * twp->second == Rational(3));
  CHECK_FALSE(symmetric_solution(opposite_sign_family(2, 4)));
  // closed forms lie on the constraint line
  for (auto [r, s] : {std::pair{4, 4}, {3, 3}}) {
    const FamilySpec f = opposite_sign_family(r, s);
    const auto sol = *symmetric_solution(f);
    const IntegerConstraint c = constraint_of(f);
    CHECK(Rational(c.cp) * sol.first + Rational(c.cq) * sol.second == Rational(c.rhs));
    CHECK(full_parameters(f, {sol.first.to_double()})[1] == doctest::Approx(sol.second.to_double()));
  }
  CHECK(opposite_sign_family(4, 4).name == "Schoen I-WP");
  CHECK(opposite_sign_family(3, 3).name == "Karcher T-WP");
}

TEST_CASE("full parameters eliminate the last upper point") {
  const FamilySpec f = equal_sign_family(2, 4);
  const auto full = full_parameters(f, {0.05});
  const IntegerConstraint c = constraint_of(f);
  CHECK(c.cp * full[0] + c.cq * full[1] == doctest::Approx(static_cast<double>(c.rhs)));
  try {
    full_parameters(f, {0.4});
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConstraintInfeasible);
  }
  CHECK_THROWS_AS(full_parameters(f, {0.1, 0.2}), Error);
}

TEST_CASE("neovius and spout exponent patterns") {
  const FamilySpec n = neovius_family(2, 4, 4);
  CHECK(n.a == Rational(-1, 2));
  CHECK(n.b == std::vector<Rational>{Rational(3, 4), Rational(3, 4)});
  CHECK(n.symmetric_reduction);
  CHECK_FALSE(n.qualitative_only);
  CHECK(neovius_family(2, 3, 6).qualitative_only == false);
  CHECK(neovius_family(4, 2, 4).qualitative_only);
  CHECK(free_dimension(n) == 2);

  const FamilySpec s = spout_family(3, 6, 3);
  REQUIRE(s.b.size() == 3);
  CHECK(s.b[0] == Rational(5, 6));
  CHECK(s.b[1] == Rational(-5, 6));
  CHECK(s.b[2] == Rational(5, 6));
  CHECK(s.a == Rational(-2, 3));
  // n = 1 coincides with the opposite-sign family
  const FamilySpec s1 = spout_family(2, 4, 1), o = opposite_sign_family(2, 4);
  CHECK(s1.a == o.a);
  CHECK(s1.b == o.b);
  CHECK(s1.angle_rhs == o.angle_rhs);
  CHECK_THROWS_AS(spout_family(2, 4, 0), Error);
}

TEST_CASE("catalog listing") {
  const auto all = all_families();
  CHECK(all.size() == 10 + 4 + 6 + 6 + 10);
  for (const auto& f : all) CHECK(is_euclidean(f.rst));
  CHECK(std::string(to_string(FamilyKind::OppositeSign)) == "opposite");
}
