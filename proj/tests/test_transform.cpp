#include <gtest/gtest.h>

#include "recipro/catalog.hpp"
#include "recipro/error.hpp"
#include "support.hpp"

using namespace recipro;

namespace {

Expression jet(const char* f, std::map<std::string, int> m) {
  MultiIndex idx;
  for (const auto& [v, k] : m) idx = idx.plus(intern_var(v), k);
  return Expression::atom(jet_atom(f, idx));
}

Expression rule(const ReciprocalTransform& t, int order, AtomId j) {
  for (const auto& [a, e] : t.derivative_rules(order))
    if (a == j) return e;
  throw std::runtime_error("no rule for " + atom_text(j));
}

int check_rules(const ReciprocalTransform& t, int order, std::uint64_t salt, int points, long double h) {
  support::ChainRuleCheck c = support::chain_rule_check(t, order, salt, points, h);
  EXPECT_EQ(c.failures, 0) << c.first_failure;
  return c.checked;
}

}  // namespace

TEST(Build, ChhGradient) {
  ReciprocalTransform t = catalog::chh_transform(1);
  const auto& rel = t.data().relations;
  Expression X0 = jet("X", {{"z0", 1}}), X1 = jet("X", {{"z1", 1}}), X2 = jet("X", {{"z2", 1}});
  EXPECT_EQ(rel.at("P"), 1 / X0);
  EXPECT_EQ(rel.at("Omega1"), 2 * X1);
  EXPECT_EQ(rel.at("Delta"), -X2 / X0);
  EXPECT_EQ(t.data().inverse_relations.at("X"), Expression::atom(independent_atom("X")));
}

TEST(Build, ChhAuxiliaryVariables) {
  ReciprocalTransform t = catalog::chh_transform(2);
  const auto& rel = t.data().relations;
  EXPECT_EQ(rel.at("Omega2"), 2 * jet("X", {{"z2", 1}}));
  EXPECT_EQ(rel.at("Delta"), -jet("X", {{"z3", 1}}) / jet("X", {{"z0", 1}}));
}

TEST(Build, MchhGradient) {
  ReciprocalTransform t = catalog::mchh_transform(1);
  const auto& rel = t.data().relations;
  Expression x0 = jet("x", {{"z0", 1}});
  EXPECT_EQ(rel.at("u"), 1 / x0);
  EXPECT_EQ(rel.at("omega1"), jet("x", {{"z1", 1}}));
  EXPECT_EQ(rel.at("delta"), -jet("x", {{"z2", 1}}) / x0);
}

TEST(Build, Errors) {
  JetSpace s = JetSpace::declare({"x", "t"}, {"u", "v"}, 4);
  ConservedPair p(s.field("u"), "t", s.field("v"), "x");
  EXPECT_THROW(build_transform(p, {}, "y", s, {}), InvalidArgument);
  EXPECT_THROW(build_transform(p, {{"w", s.field("u")}}, "x", s, {}), UnknownName);
  ConservedPair zero(Expression(1), "t", Expression(0), "x");
  EXPECT_THROW(build_transform(zero, {}, "t", s, {}), ZeroPivot);
}

TEST(Build, IdentityRelabeling) {
  JetSpace s = JetSpace::declare({"x", "t"}, {"u"}, 4);
  ConservedPair p(Expression(1), "t", Expression(0), "x");
  BuildOptions o;
  o.retained = {"u"};
  ReciprocalTransform t = build_transform(p, {}, "x", s, o);
  EXPECT_EQ(t.data().relations.count("u"), 0u);
  SubstitutionMap unit{{jet("X", {{"z0", 1}}).as_atom(), Expression(1)}, {jet("X", {{"t", 1}}).as_atom(), Expression()}};
  EXPECT_EQ(substitute(rule(t, 1, jet("u", {{"x", 1}}).as_atom()), unit), jet("u", {{"z0", 1}}));
  EXPECT_EQ(substitute(rule(t, 1, jet("u", {{"t", 1}}).as_atom()), unit), jet("u", {{"t", 1}}));
  PDESystem heat("heat", s, {{"heat", s.parse("u_t - u_{x,x}")}});
  JetSpace zs = JetSpace::declare({"z0", "t"}, {"u"}, 4);
  PDESystem expected("heat", zs, {{"heat", zs.parse("u_t - u_{z0,z0}")}});
  // dz = dx fixes X = z0
  ApplyOptions ao;
  ao.extra_relations = {{"X_z0", jet("X", {{"z0", 1}}) - 1}, {"X_t", jet("X", {{"t", 1}})}};
  PDESystem out = t.apply(heat, ao).without_fields({"X"});
  EXPECT_TRUE(systems_equivalent(out, expected).holds);
}

TEST(DerivativeRules, OrderOneForms) {
  ReciprocalTransform t = catalog::chh_transform(1);
  Expression X0 = jet("X", {{"z0", 1}});
  for (const char* f : {"P", "Delta", "Omega1"}) {
    EXPECT_EQ(rule(t, 1, jet(f, {{"X", 1}}).as_atom()), jet(f, {{"z0", 1}}) / X0);
    EXPECT_EQ(rule(t, 1, jet(f, {{"Y", 1}}).as_atom()), jet(f, {{"z1", 1}}) - jet("X", {{"z1", 1}}) / X0 * jet(f, {{"z0", 1}}));
    EXPECT_EQ(rule(t, 1, jet(f, {{"T", 1}}).as_atom()), jet(f, {{"z2", 1}}) - jet("X", {{"z2", 1}}) / X0 * jet(f, {{"z0", 1}}));
  }
  // with P = 1/X_z0 the X-derivative is P times the z0-derivative
  EXPECT_EQ(substitute(rule(t, 1, jet("Omega1", {{"X", 1}}).as_atom()), {{X0.as_atom(), 1 / Expression::atom(jet_atom("P"))}}),
            Expression::atom(jet_atom("P")) * jet("Omega1", {{"z0", 1}}));
  EXPECT_THROW(t.derivative_rules(0), InvalidArgument);
}

TEST(DerivativeRules, ChainRuleAgainstFiniteDifferences) {
  ReciprocalTransform t = catalog::chh_transform(1);
  int checked = check_rules(t, 2, 51, 10, 1e-4L);
  EXPECT_GE(checked, 10 * 27);
}

TEST(DerivativeRules, GenericTwoVariableTransform) {
  JetSpace src = JetSpace::declare({"x", "t"}, {"u"}, 6);
  JetSpace tgt = JetSpace::declare({"z0", "s"}, {"X"}, 6);
  GradientSpec g{src, tgt, "x", "z0", {{"t", "s"}}, "X", {}, {}};
  g.gradient["z0"] = tgt.jet("X", {{"z0", 1}});
  g.gradient["s"] = tgt.jet("X", {{"s", 1}});
  ReciprocalTransform t = build_from_gradient(g);
  int checked = check_rules(t, 3, 52, 10, 2e-3L);
  EXPECT_EQ(checked, 10 * 9);
}

TEST(Inverse, Involution) {
  for (const ReciprocalTransform& t : {catalog::mchh_transform(1), catalog::chh_transform(1)}) {
    ReciprocalTransform back = t.inverse().inverse();
    EXPECT_EQ(back.data().relations, t.data().relations);
    EXPECT_EQ(back.data().gradient, t.data().gradient);
    EXPECT_EQ(back.data().one_form, t.data().one_form);
    EXPECT_EQ(back.data().inverse_relations, t.data().inverse_relations);
    auto a = t.derivative_rules(2), b = back.derivative_rules(2);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].first, b[i].first);
      EXPECT_EQ(a[i].second, b[i].second);
    }
  }
}

// source jet -> target rule -> back through the inverse's eliminated rules gives the jet again
TEST(Inverse, RulesComposeToIdentity) {
  ReciprocalTransform t = catalog::chh_transform(1);
  ReciprocalTransform inv = t.inverse();
  for (const auto& [j, e] : t.derivative_rules(2)) {
    SubstitutionMap back;
    for (AtomId a : e.atoms())
      if (atom_info(a).kind == AtomKind::Jet) back[a] = inv.eliminated_rule(a);
    EXPECT_EQ(substitute(e, back), Expression::atom(j)) << atom_text(j);
  }
}

TEST(Apply, RoundTrip) {
  ApplyOptions o;
  ReciprocalTransform t = catalog::chh_transform(1);
  EXPECT_TRUE(systems_equivalent(t.inverse().apply(t.apply(catalog::chh(1), o), o), catalog::chh(1)).holds);
  ReciprocalTransform m = catalog::mchh_transform(1);
  EXPECT_TRUE(systems_equivalent(m.inverse().apply(m.apply(catalog::mchh(1), o), o), catalog::mchh(1)).holds);
}

TEST(Apply, ThreeVariableForm) {
  for (int n = 1; n <= 2; ++n) {
    PDESystem out = catalog::chh_transform(n).apply(catalog::chh(n));
    EXPECT_TRUE(systems_equivalent(out, catalog::chh_three_variable(n)).holds) << n;
    EXPECT_TRUE(catalog::verify_locality(out, n).holds) << n;
  }
}

TEST(Potentialize, Toy) {
  JetSpace s = JetSpace::declare({"t", "x"}, {"u", "v"}, 4);
  PDESystem sys("toy", s, {{"cons", s.parse("u_t - v_x")}});
  Report closure;
  PDESystem p = potentialize(sys, {ConservedPair(s.field("u"), "t", s.field("v"), "x")}, "w", &closure);
  EXPECT_TRUE(closure.holds);
  JetSpace ws = p.space();
  PDESystem expected("toy", ws, {{"w_x", ws.parse("w_x - u")}, {"w_t", ws.parse("w_t - v")}, {"cons", ws.parse("u_t - v_x")}});
  EXPECT_TRUE(systems_equivalent(p, expected).holds);
  EXPECT_THROW(potentialize(sys, {ConservedPair(s.field("v"), "t", s.field("u"), "x")}, "w"), NotConservative);
  EXPECT_THROW(potentialize(sys, {}, "w"), InvalidArgument);
}

TEST(Closure, TransfersToTarget) {
  ReciprocalTransform t = catalog::chh_transform(1);
  SolvedSystem s = solve_leading(catalog::chh(1));
  EXPECT_TRUE(verify_closed(OneForm("z0", {t.data().one_form.begin(), t.data().one_form.end()}), s).holds);
}
