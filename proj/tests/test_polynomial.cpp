#include <gtest/gtest.h>

#include "recipro/polynomial.hpp"
#include "support.hpp"

using namespace recipro;

namespace {

Polynomial var(const char* n) { return Polynomial::atom(jet_atom(n)); }

Polynomial random_poly(std::mt19937_64& g, const std::vector<Polynomial>& vars, int terms, int degree) {
  std::uniform_int_distribution<int> c(-4, 4), d(0, degree);
  Polynomial p;
  for (int t = 0; t < terms; ++t) {
    Polynomial m(static_cast<long>(c(g)));
    for (const auto& v : vars) m = m * v.pow(static_cast<unsigned>(d(g)));
    p += m;
  }
  return p;
}

bool divides(const Polynomial& d, const Polynomial& p) { return p.is_zero() || d.is_zero() ? p.is_zero() : p.divide_exact(d).has_value(); }

}  // namespace

TEST(Polynomial, Arithmetic) {
  Polynomial x = var("px"), y = var("py");
  EXPECT_EQ((x + y) * (x - y), x * x - y * y);
  EXPECT_EQ((x + y).pow(3), x.pow(3) + x * x * y * Rational(3) + x * y * y * Rational(3) + y.pow(3));
  EXPECT_TRUE((x - x).is_zero());
  EXPECT_EQ(*(x * x - y * y).divide_exact(x + y), x - y);
  EXPECT_FALSE((x * x + y).divide_exact(x + y).has_value());
}

TEST(Polynomial, GcdExamples) {
  Polynomial x = var("px"), y = var("py");
  EXPECT_TRUE(gcd(x + Polynomial(1), x - Polynomial(1)).is_constant());
  Polynomial g = gcd((x + y) * (x - y), (x + y).pow(2));
  EXPECT_TRUE(divides(x + y, g) && divides(g, x + y));
  EXPECT_TRUE(gcd(Polynomial(6), Polynomial(4)).is_constant());
  EXPECT_EQ(gcd(Polynomial(), x + y).monic(), (x + y).monic());
}

TEST(Polynomial, PartialAndCoefficients) {
  Polynomial x = var("px"), y = var("py");
  AtomId ax = jet_atom("px");
  Polynomial p = x.pow(3) * y + x * Rational(2) + y;
  EXPECT_EQ(p.partial(ax), x * x * y * Rational(3) + Polynomial(2));
  EXPECT_EQ(p.degree_in(ax), 3);
  EXPECT_EQ(Polynomial::from_coefficients(ax, p.coefficients_in(ax)), p);
}

// gcd(a g, b g) is a multiple of g and divides both products
TEST(Polynomial, GcdProperty) {
  auto g = support::rng(21);
  std::vector<Polynomial> vars{var("px"), var("py"), var("pz")};
  for (int i = 0; i < 150; ++i) {
    Polynomial f = random_poly(g, vars, 2, 2), a = random_poly(g, vars, 3, 2), b = random_poly(g, vars, 3, 2);
    if (f.is_zero() || a.is_zero() || b.is_zero()) continue;
    Polynomial af = a * f, bf = b * f;
    Polynomial h = gcd(af, bf);
    ASSERT_TRUE(divides(f, h)) << i;
    ASSERT_TRUE(divides(h, af)) << i;
    ASSERT_TRUE(divides(h, bf)) << i;
  }
}

TEST(Polynomial, ExactDivisionRecoversFactor) {
  auto g = support::rng(22);
  std::vector<Polynomial> vars{var("px"), var("py")};
  for (int i = 0; i < 200; ++i) {
    Polynomial a = random_poly(g, vars, 3, 3), b = random_poly(g, vars, 3, 3);
    if (b.is_zero()) continue;
    auto q = (a * b).divide_exact(b);
    ASSERT_TRUE(q.has_value());
    ASSERT_EQ(*q, a);
  }
}
