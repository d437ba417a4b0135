#include <gtest/gtest.h>

#include "recipro/catalog.hpp"
#include "recipro/error.hpp"
#include "recipro/numeric.hpp"
#include "support.hpp"

using namespace recipro;

namespace {

PDESystem one(const JetSpace& s, const std::string& text) { return PDESystem("toy", s, {{"e", s.parse(text)}}); }

}  // namespace

TEST(SolveLeading, Examples) {
  JetSpace s = JetSpace::declare({"x"}, {"u", "v"}, 3);
  SolvedSystem a = solve_leading(one(s, "u_x - v"));
  ASSERT_EQ(a.rules().size(), 1u);
  EXPECT_EQ(a.rules()[0].lead, s.jet("u", {{"x", 1}}).as_atom());
  EXPECT_EQ(a.rules()[0].rhs, s.field("v"));
  EXPECT_THROW(solve_leading(one(s, "u_x^2 - 1")), NotSolvable);
  EXPECT_THROW(solve_leading(PDESystem("c", s, {{"e", Expression(3)}})), NotSolvable);
}

TEST(SolveLeading, ChhFirstEquation) {
  PDESystem sys = catalog::chh(1);
  SolvedSystem s = solve_leading(sys);
  const JetSpace& sp = sys.space();
  auto i = s.rule_for(sp.jet("P", {{"Y", 1}}).as_atom());
  ASSERT_TRUE(i.has_value());
  Expression P = sp.field("P"), W = sp.field("Omega1");
  EXPECT_EQ(s.rules()[*i].rhs, -sp.total_derivative(P * W, "X") / 2);
}

TEST(Reduce, Examples) {
  PDESystem sys = catalog::chh(1);
  SolvedSystem s = solve_leading(sys);
  const JetSpace& sp = sys.space();
  Expression P = sp.field("P"), W = sp.field("Omega1");
  EXPECT_EQ(reduce(P, s), P);
  EXPECT_TRUE(is_zero(reduce(sp.jet("P", {{"Y", 1}}) + sp.total_derivative(P * W, "X") / 2, s)));
  Expression cross = sp.total_derivative(sp.jet("P", {{"Y", 1}}), "X") - sp.total_derivative(sp.jet("P", {{"X", 1}}), "Y");
  EXPECT_TRUE(is_zero(reduce(cross, s)));
}

TEST(Reduce, BudgetExceededThrows) {
  SolvedSystem s = solve_leading(catalog::chh(2));
  s.set_budget(1);
  const JetSpace& sp = s.space();
  EXPECT_THROW(reduce(sp.total_derivative(sp.jet("P", {{"Y", 2}}), "T"), s), NonTermination);
}

// reduce is idempotent and preserves values on the solution manifold
TEST(Reduce, IdempotentAndNumericallySound) {
  PDESystem sys = catalog::chh(1);
  SolvedSystem s = solve_leading(sys);
  const JetSpace& sp = sys.space();
  std::vector<Expression> atoms;
  for (const auto& f : sp.dependents())
    for (AtomId a : sp.jets(f, 1)) atoms.push_back(Expression::atom(a));
  auto g = support::rng(41);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  for (int i = 0; i < 40; ++i) {
    Expression e = atoms[pick(g)] * atoms[pick(g)] + atoms[pick(g)] / (atoms[pick(g)] * atoms[pick(g)] + 2);
    Expression e2 = sp.total_derivative(e, i % 2 ? "Y" : "T");
    Expression r = reduce(e2, s);
    ASSERT_EQ(reduce(r, s), r);
    NumericCheck c = numeric_zero_check(e2 - r, s, 10, 1e-6, oracle_seed() + i);
    ASSERT_TRUE(c.ok) << to_text(e2) << " max " << static_cast<double>(c.max_abs);
    ASSERT_GE(c.samples, 10u);
  }
}

TEST(VerifyConserved, CatalogPairs) {
  for (int n = 1; n <= 2; ++n) {
    SolvedSystem s = solve_leading(catalog::chh(n));
    EXPECT_TRUE(verify_conserved(catalog::chh_pair(n), s).holds);
    EXPECT_TRUE(verify_conserved(catalog::chh_time_pair(n), s).holds);
    SolvedSystem m = solve_leading(catalog::mchh(n));
    EXPECT_TRUE(verify_conserved(catalog::mchh_pair(n), m).holds);
  }
  PDESystem sys = catalog::mchh(1);
  const JetSpace& sp = sys.space();
  Expression u = sp.field("u");
  SolvedSystem m = solve_leading(sys);
  EXPECT_TRUE(verify_conserved(ConservedPair(u, "t", sp.field("delta"), "x"), m).holds);
  EXPECT_FALSE(verify_conserved(ConservedPair(u, "t", 2 * sp.field("delta"), "x"), m).holds);
}

TEST(ConservedPair, Invariant) {
  JetSpace s = JetSpace::declare({"x", "y"}, {"u"}, 2);
  EXPECT_THROW(ConservedPair(s.field("u"), "x", s.field("u"), "y"), InvalidArgument);
  EXPECT_THROW(ConservedPair(s.field("u"), "x", 2 * s.field("u"), "x"), InvalidArgument);
}

TEST(VerifyClosed, Examples) {
  for (int n = 1; n <= 2; ++n) {
    SolvedSystem s = solve_leading(catalog::chh(n));
    Report r = verify_closed(catalog::chh_one_form(n), s);
    EXPECT_TRUE(r.holds);
    // one condition per pair of variables
    EXPECT_EQ(r.residuals.size(), 3u);
    EXPECT_TRUE(verify_closed(catalog::mchh_one_form(n), solve_leading(catalog::mchh(n))).holds);
  }
  JetSpace s = JetSpace::declare({"x", "y"}, {"u"}, 2);
  SolvedSystem empty(s, Ranking::default_for(s));
  Expression u = s.field("u");
  EXPECT_FALSE(verify_closed(OneForm("z", {{"x", u}, {"y", u}}), empty).holds);
  EXPECT_TRUE(verify_closed(OneForm("z", {{"x", s.jet("u", {{"x", 1}})}, {"y", s.jet("u", {{"y", 1}})}}), empty).holds);
}

TEST(VerifyClosed, ResidualCount) {
  JetSpace s = JetSpace::declare({"a", "b", "c", "d"}, {"u"}, 2);
  SolvedSystem empty(s, Ranking::default_for(s));
  Expression u = s.field("u");
  Report r = verify_closed(OneForm("z", {{"a", u}, {"b", u}, {"c", u}, {"d", u}}), empty);
  EXPECT_EQ(r.residuals.size(), 6u);
  EXPECT_FALSE(r.holds);
}

TEST(SearchConserved, Examples) {
  {
    SolvedSystem s = solve_leading(catalog::chh(1));
    const JetSpace& sp = s.space();
    Expression P = sp.field("P"), W = sp.field("Omega1");
    auto found = search_conserved(s, "Y", "X", 2, 1);
    bool hit = false;
    for (const auto& p : found) hit = hit || proportional(p.a(), P) && is_zero(p.a_prime() * P - p.a() * (-P * W / 2));
    EXPECT_TRUE(hit);
    for (const auto& p : found) EXPECT_TRUE(verify_conserved(p, s).holds);
  }
  {
    SolvedSystem s = solve_leading(catalog::mchh(1));
    const JetSpace& sp = s.space();
    Expression u = sp.field("u"), w = sp.field("omega1");
    auto found = search_conserved(s, "y", "x", 2, 0);
    bool hit = false;
    for (const auto& p : found) hit = hit || proportional(p.a(), u) && is_zero(p.a_prime() * u - p.a() * (-u * w));
    EXPECT_TRUE(hit);
  }
  {
    JetSpace sp = JetSpace::declare({"t", "x"}, {"u", "v"}, 2);
    PDESystem sys("heat", sp, {{"u_t", sp.parse("u_t - v")}, {"v_t", sp.parse("v_t - u")}});
    EXPECT_TRUE(search_conserved(solve_leading(sys), "t", "x", 1, 0).empty());
  }
}

TEST(SystemsEquivalent, Examples) {
  PDESystem a = catalog::chh(1);
  EXPECT_TRUE(systems_equivalent(a, a).holds);
  EXPECT_FALSE(systems_equivalent(a, catalog::mchh(1)).holds);
  EXPECT_FALSE(systems_equivalent(catalog::chh(1), catalog::chh(2)).holds);
  // each equation scaled and combined with an earlier one
  std::vector<Equation> eqs = a.equations();
  eqs[1].expr = 3 * eqs[1].expr + a.space().field("P") * eqs[0].expr;
  PDESystem b("mixed", a.space(), eqs, a.ranking());
  EXPECT_TRUE(systems_equivalent(a, b).holds);
}

// the U-form of the hierarchy under U = P^2 is the P-form
TEST(SystemsEquivalent, UFormAgainstPForm) {
  for (int n = 1; n <= 2; ++n) {
    PDESystem p = catalog::chh(n);
    const JetSpace& s = p.space();
    JetSpace us = s.extended({"U"});
    Expression P = us.field("P"), U = us.field("U");
    auto D = [&](const Expression& e, const char* v) { return us.total_derivative(e, v); };
    auto J = [&](const Expression& w) { return -(D(U * w, "X") + U * D(w, "X")) / 2; };
    auto K = [&](const Expression& w) { return D(D(D(w, "X"), "X"), "X") - D(w, "X"); };
    std::vector<Equation> eqs;
    eqs.push_back({"U_Y", D(U, "Y") - J(us.field(catalog::omega(1)))});
    for (int i = 1; i < n; ++i) eqs.push_back({"chain", J(us.field(catalog::omega(i + 1))) - K(us.field(catalog::omega(i)))});
    eqs.push_back({"U_T", D(U, "T") - K(us.field(catalog::omega(n)))});
    std::vector<Equation> subst;
    for (auto& e : eqs) subst.push_back({e.label, substitute_field(us, e.expr, "U", P * P)});
    for (const auto& e : p.equations())
      if (e.definition) subst.push_back(e);
    std::vector<Equation> on_s;
    for (const auto& e : subst) on_s.push_back({e.label, e.expr, e.definition});
    PDESystem q("u-form", s, on_s, p.ranking());
    EXPECT_TRUE(systems_equivalent(p, q).holds) << n;
  }
}

TEST(CriticalPairs, ChhIsCoherent) {
  SolvedSystem s = solve_leading(catalog::chh(1));
  for (const auto& cp : critical_pairs(s, s.space().dependents())) EXPECT_TRUE(is_zero(cp.difference)) << atom_text(cp.jet);
}
