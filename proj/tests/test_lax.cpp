#include <gtest/gtest.h>

#include "recipro/catalog.hpp"
#include "recipro/error.hpp"
#include "recipro/numeric.hpp"
#include "support.hpp"

using namespace recipro;
namespace cat = recipro::catalog;

namespace {

LaxPair trivial() {
  JetSpace s = JetSpace::declare({"x", "t"}, {"u", "phi"}, 4);
  LaxPair lp;
  lp.name = "trivial";
  lp.space = s;
  lp.eigen = {"phi"};
  lp.spatial = {{"phi_x", s.jet("phi", {{"x", 1}})}};
  lp.temporal = {{"phi_t", s.jet("phi", {{"t", 1}})}};
  return lp;
}

// compatibility coefficients reduced modulo sys and the constraints, each checked numerically
struct Verdict {
  bool symbolic_zero = true;
  bool numeric_zero = true;
};

Verdict check(const LaxPair& lp, const PDESystem& sys, CompatibilityRoute route) {
  Verdict v;
  auto coeffs = route == CompatibilityRoute::ZeroCurvature ? zero_curvature(lp) : compatibility_residual(lp);
  SolvedSystem s = system_with_constraints(lp, sys);
  for (const auto& c : coeffs) {
    if (!is_zero(s.reduce(c))) v.symbolic_zero = false;
    NumericCheck n = numeric_zero_check(c, s, 10, 1e-6);
    EXPECT_GE(n.samples, 10u);
    if (!n.ok) v.numeric_zero = false;
  }
  return v;
}

}  // namespace

TEST(Compatibility, TrivialPair) {
  LaxPair lp = trivial();
  for (const auto& c : compatibility_residual(lp)) EXPECT_TRUE(is_zero(c));
  PDESystem sys("free", lp.space, {});
  EXPECT_TRUE(verify_yields(lp, sys).holds);
}

TEST(Compatibility, NotLinear) {
  JetSpace s = JetSpace::declare({"x"}, {"u", "phi"}, 3);
  EXPECT_THROW(eigen_coefficients(s.parse("phi_x*phi"), {"phi"}), NotLinearInEigenfunction);
  EXPECT_THROW(eigen_coefficients(s.parse("phi_x + u"), {"phi"}), NotLinearInEigenfunction);
  auto c = eigen_coefficients(s.parse("phi_x + u*phi"), {"phi"});
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.at(s.field("phi").as_atom()), s.field("u"));
  EXPECT_TRUE(is_linear_homogeneous(s.parse("u^2*phi_{x,x} - phi"), {"phi"}));
  EXPECT_FALSE(is_linear_homogeneous(s.parse("phi^2"), {"phi"}));
}

TEST(VerifyYields, ChhScalarPair) {
  for (int n = 1; n <= 2; ++n) {
    Verdict v = check(cat::chh_lax(n), cat::chh(n), CompatibilityRoute::CrossDerivative);
    EXPECT_TRUE(v.symbolic_zero && v.numeric_zero) << n;
    EXPECT_TRUE(verify_yields(cat::chh_lax(n), cat::chh(n)).holds) << n;
  }
}

TEST(VerifyYields, MchhMatrixPair) {
  Verdict z = check(cat::mchh_lax(1), cat::mchh(1), CompatibilityRoute::ZeroCurvature);
  EXPECT_TRUE(z.symbolic_zero && z.numeric_zero);
  Verdict c = check(cat::mchh_lax(1), cat::mchh(1), CompatibilityRoute::CrossDerivative);
  EXPECT_TRUE(c.symbolic_zero && c.numeric_zero);
}

TEST(VerifyYields, N0Pair) {
  for (long k : {2L, -1L}) {
    Verdict v = check(cat::n0_lax(Rational(k)), cat::n0_system(Rational(k)), CompatibilityRoute::CrossDerivative);
    EXPECT_TRUE(v.symbolic_zero && v.numeric_zero) << k;
  }
  Verdict bad = check(cat::n0_lax(Rational(0)), cat::n0_system(Rational(0)), CompatibilityRoute::CrossDerivative);
  EXPECT_FALSE(bad.symbolic_zero);
  EXPECT_FALSE(bad.numeric_zero);
}

TEST(VerifyYields, ReducedPairs) {
  EXPECT_TRUE(verify_yields(cat::dp_lax(), cat::dp_golden()).holds);
  EXPECT_TRUE(verify_yields(cat::vakhnenko_lax(), cat::vakhnenko_golden()).holds);
  EXPECT_FALSE(verify_yields(cat::vakhnenko_lax(true), cat::vakhnenko_golden()).holds);
}

// lambda_T = 0 in place of the non-isospectral constraint: residual is a multiple of lambda_Y
TEST(VerifyYields, BrokenConstraintControls) {
  LaxPair lp = cat::chh_lax(1, true);
  Verdict v = check(lp, cat::chh(1), CompatibilityRoute::CrossDerivative);
  EXPECT_FALSE(v.symbolic_zero);
  EXPECT_FALSE(v.numeric_zero);
  SolvedSystem s = system_with_constraints(lp, cat::chh(1));
  AtomId ly = lp.space.jet("lambda", {{"Y", 1}}).as_atom();
  for (const auto& c : compatibility_residual(lp)) EXPECT_TRUE(is_zero(substitute(s.reduce(c), {{ly, Expression()}})));

  Verdict m = check(cat::mchh_lax(1, true), cat::mchh(1), CompatibilityRoute::ZeroCurvature);
  EXPECT_FALSE(m.symbolic_zero);
  EXPECT_FALSE(m.numeric_zero);
}

TEST(VerifyYields, WrongSystemFails) {
  EXPECT_FALSE(verify_yields(cat::chh_lax(1), cat::chh(2)).holds);
}

TEST(Constraints, SpectralFieldRankedHighest) {
  LaxPair lp = cat::chh_lax(2);
  SolvedSystem s = system_with_constraints(lp, cat::chh(2));
  const JetSpace& sp = lp.space;
  // lambda_X and lambda_T are principal; the constraint lambda_T = lambda^2 lambda_Y holds after reduction
  Expression l = sp.field("lambda");
  EXPECT_TRUE(is_zero(s.reduce(sp.jet("lambda", {{"X", 1}}))));
  EXPECT_TRUE(is_zero(s.reduce(sp.jet("lambda", {{"T", 1}}) - l * l * sp.jet("lambda", {{"Y", 1}}))));
  // consistency: mixed derivatives of the constraints agree
  Expression a = sp.total_derivative(sp.jet("lambda", {{"T", 1}}), "X");
  Expression b = sp.total_derivative(sp.jet("lambda", {{"X", 1}}), "T");
  EXPECT_TRUE(is_zero(s.reduce(a - b)));
}

TEST(ReduceLax, EmptyRulesIsIdentity) {
  LaxPair lp = cat::chh_lax(1);
  LaxPair r = reduce_lax(lp, LaxReduction{}, lp.space);
  ASSERT_EQ(r.spatial.size(), lp.spatial.size());
  ASSERT_EQ(r.temporal.size(), lp.temporal.size());
  for (std::size_t i = 0; i < lp.spatial.size(); ++i) EXPECT_TRUE(proportional(r.spatial[i].expr, lp.spatial[i].expr));
  for (std::size_t i = 0; i < lp.temporal.size(); ++i) EXPECT_TRUE(proportional(r.temporal[i].expr, lp.temporal[i].expr));
}

TEST(ReduceLax, N0ReductionMatchesDisplayedPair) {
  for (long k : {2L, -1L}) {
    Rational a1 = Rational(k + 1, 3), a2 = Rational(2 - k, 3);
    LaxPair reduced = reduce_lax(cat::n0_psi_golden(Rational(k)), cat::n0_reduction(), cat::reduced_space());
    PDESystem sys = cat::n0_reduced_golden(a1, a2);
    EXPECT_TRUE(lax_implies(reduced, cat::n0_reduced_lax_golden(a1, a2), sys).holds) << k;
  }
}

TEST(ReduceLax, InconsistentReduction) {
  LaxPair lp = cat::n0_psi_golden(Rational(2));
  LaxReduction r = cat::n0_reduction();
  r.separations.push_back(r.separations.front());
  EXPECT_THROW(reduce_lax(lp, r, cat::reduced_space()), InconsistentReduction);
}

TEST(LaxImplies, Reflexive) {
  LaxPair lp = cat::chh_lax(1);
  EXPECT_TRUE(lax_implies(lp, lp, cat::chh(1)).holds);
}
