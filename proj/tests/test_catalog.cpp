#include <gtest/gtest.h>

#include "recipro/catalog.hpp"
#include "recipro/error.hpp"
#include "recipro/numeric.hpp"
#include "support.hpp"

using namespace recipro;
namespace cat = recipro::catalog;

TEST(Catalog, EquationCounts) {
  for (int n = 1; n <= cat::kMaxLevel; ++n) {
    EXPECT_EQ(cat::chh(n).dynamic_count(), static_cast<std::size_t>(n + 1));
    EXPECT_EQ(cat::mchh(n).dynamic_count(), static_cast<std::size_t>(2 * n + 1));
  }
}

TEST(Catalog, LevelErrors) {
  EXPECT_THROW(cat::chh(0), InvalidArgument);
  EXPECT_THROW(cat::chh(cat::kMaxLevel + 1), InvalidArgument);
  EXPECT_THROW(cat::mchh(0), InvalidArgument);
  EXPECT_THROW(cat::cbs(2, 1), InvalidArgument);
  EXPECT_THROW(cat::mcbs(0, 1), InvalidArgument);
  EXPECT_THROW(cat::scenario("no-such-scenario"), UnknownName);
}

TEST(Catalog, ChhFirstMember) {
  PDESystem sys = cat::chh(1);
  const JetSpace& s = sys.space();
  PDESystem printed("printed", s,
                    {{"P_Y", s.parse("P_Y + 1/2*(P*Omega1)_X")},
                     {"P_T", s.parse("2*P*Delta_X - Omega1_{X,X,X} + Omega1_X")},
                     {"Delta_X", s.parse("P_T - Delta_X"), true},
                     {"Delta_Y", s.parse("Delta_Y + 1/2*(P*Omega1)_T"), true}},
                    sys.ranking());
  EXPECT_TRUE(systems_equivalent(sys, printed).holds);
}

TEST(Catalog, MchhFirstMember) {
  PDESystem sys = cat::mchh(1);
  const JetSpace& s = sys.space();
  SolvedSystem solved = solve_leading(sys);
  for (const char* e : {"u_y + (u*omega1)_x", "omega1_x - u*v1_x", "u_t - v1_{x,x,x} + v1_x"})
    EXPECT_TRUE(is_zero(solved.reduce(s.parse(e)))) << e;
}

TEST(Catalog, EverySystemSolvable) {
  std::vector<PDESystem> all;
  for (int n = 1; n <= 3; ++n) {
    all.push_back(cat::chh(n));
    all.push_back(cat::mchh(n));
    all.push_back(cat::chh_three_variable(n));
    all.push_back(cat::mchh_three_variable(n));
    all.push_back(cat::mcbs_all(n));
    for (int i = 1; i <= n; ++i) all.push_back(cat::cbs(i, n));
  }
  for (std::optional<Rational> k : {std::optional<Rational>(), std::optional<Rational>(2), std::optional<Rational>(-1)}) {
    all.push_back(cat::n0_system(k));
    all.push_back(cat::n0_transf_golden(k));
  }
  for (long k : {2L, -1L}) {
    all.push_back(cat::n0_final(Rational(k)));
    all.push_back(cat::n0_final_in_alpha(Rational(k)));
    all.push_back(cat::n0_reduced_from_final(Rational(k)));
  }
  all.push_back(cat::dp_golden());
  all.push_back(cat::vakhnenko_golden());
  all.push_back(cat::n0_reduced_golden(1, 0));
  for (const auto& sys : all) EXPECT_NO_THROW(solve_leading(sys)) << sys.name();
}

// A1 = (k+1)/3 and A2 = (2-k)/3 on the integrable branches
TEST(Catalog, BranchCoefficients) {
  AtomId k = parameter_atom("k");
  Polynomial cond = cat::n0_pipeline(std::nullopt).integrability;
  EXPECT_EQ(cond, Polynomial::atom(k, 2) - Polynomial::atom(k) - Polynomial(2));
  for (long kv : {2L, -1L}) {
    Rational a1 = Rational(kv + 1, 3), a2 = Rational(2 - kv, 3);
    EXPECT_EQ(a1 * a2, 0);
    EXPECT_EQ(a1 + a2, 1);
    Assignment at;
    at.set(k, static_cast<double>(kv));
    EXPECT_NEAR(eval_numeric(Expression::polynomial(cond), at), 0.0, 1e-12);
    EXPECT_TRUE(systems_equivalent(cat::n0_reduced_from_final(Rational(kv)), cat::n0_reduced_golden(a1, a2)).holds) << kv;
  }
  Assignment at0;
  at0.set(k, 0.0);
  EXPECT_NE(eval_numeric(Expression::polynomial(cond), at0), 0.0);
}

TEST(Catalog, N0Closure) {
  EXPECT_TRUE(cat::verify_n0_closure(std::nullopt).holds);
  EXPECT_TRUE(cat::verify_n0_closure(Rational(2)).holds);
  EXPECT_TRUE(cat::verify_n0_closure(Rational(-1)).holds);
}

TEST(Catalog, N0TransformedEquivalentToFinal) {
  for (long k : {2L, -1L}) EXPECT_TRUE(systems_equivalent(cat::n0_pipeline(Rational(k)).transformed, cat::n0_transf_golden(Rational(k))).holds);
}

TEST(Catalog, CbsWithNumericOracle) {
  for (int n = 1; n <= 2; ++n) {
    cat::CbsResult r = cat::cbs_check(n);
    EXPECT_TRUE(r.report.holds) << n;
    for (int i = 1; i <= n; ++i) {
      NumericCheck c = numeric_zero_check(cat::cbs_expression(r.solved.space(), i), r.solved, 10, 1e-6);
      EXPECT_TRUE(c.ok) << "n=" << n << " i=" << i << " max " << static_cast<double>(c.max_abs);
      EXPECT_GE(c.samples, 10u);
    }
  }
}

TEST(Catalog, MiuraAndSignFlip) {
  for (int n = 1; n <= 2; ++n) {
    cat::MiuraResult good = cat::miura_check(n, -1);
    EXPECT_TRUE(good.report.holds) << n;
    for (const auto& e : good.unreduced) EXPECT_TRUE(numeric_zero_check(e, good.solved).ok);
    cat::MiuraResult bad = cat::miura_check(n, 1);
    EXPECT_FALSE(bad.report.holds) << n;
    bool any_nonzero = false;
    for (const auto& e : bad.unreduced) any_nonzero = any_nonzero || !numeric_zero_check(e, bad.solved).ok;
    EXPECT_TRUE(any_nonzero) << n;
  }
}

TEST(Catalog, LaxCatalogNames) {
  auto pairs = cat::lax_catalog(1);
  EXPECT_EQ(pairs.size(), 6u);
  for (const auto& [name, lp] : pairs) {
    EXPECT_FALSE(lp.spatial.empty()) << name;
    EXPECT_FALSE(lp.temporal.empty()) << name;
  }
}

TEST(Scenarios, SortedAndAsExpected) {
  const auto& all = cat::scenarios();
  EXPECT_EQ(all.size(), 26u);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1].name, all[i].name);
  for (int n = 1; n <= 2; ++n)
    for (const auto& s : all) {
      Report r = s.run(n, kDefaultBudget);
      EXPECT_EQ(r.holds ? "holds" : "fails", s.expected) << s.name << " n=" << n;
    }
}
