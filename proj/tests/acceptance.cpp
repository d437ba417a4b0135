// One pass/fail line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "recipro/catalog.hpp"
#include "recipro/numeric.hpp"
#include "support.hpp"

using namespace recipro;
namespace cat = recipro::catalog;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::string> details;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
  // runs f, requiring it to succeed within `limit` seconds
  void timed(const std::string& what, double limit, const std::function<bool()>& f) {
    auto t0 = Clock::now();
    bool r = false;
    try {
      r = f();
    } catch (const std::exception& e) {
      failures.push_back(what + " threw " + e.what());
      ok = false;
      return;
    }
    double s = seconds_since(t0);
    std::ostringstream os;
    os.precision(3);
    os << what << " " << s << "s";
    details.push_back(os.str());
    expect(r, what);
    expect(s < limit, what + " exceeded " + std::to_string(limit) + "s");
  }
};

bool holds(const Report& r) { return r.holds; }

// every equation of `a` vanishes numerically on the solution manifold of `b`
bool numerically_implied(const PDESystem& a, const PDESystem& b, std::uint64_t seed, std::string* where) {
  SolvedSystem s = solve_leading(b, b.ranking() ? b.ranking() : a.ranking());
  for (const auto& eq : a.equations()) {
    NumericCheck c = numeric_zero_check(eq.expr, s, 10, 1e-6, seed);
    if (!c.ok || c.samples < 10) {
      *where = a.name() + ": " + eq.label + " on " + b.name();
      return false;
    }
  }
  return true;
}

bool numerically_equivalent(const PDESystem& a, const PDESystem& b, std::uint64_t seed, std::string* where) {
  return numerically_implied(a, b, seed, where) && numerically_implied(b, a, seed + 1, where);
}

bool numeric_zero(const std::vector<Expression>& es, const SolvedSystem& s, std::uint64_t seed) {
  for (const auto& e : es) {
    NumericCheck c = numeric_zero_check(e, s, 10, 1e-6, seed);
    if (!c.ok || c.samples < 10) return false;
  }
  return true;
}

std::vector<Expression> conservation_residual(const ConservedPair& p, const JetSpace& s) {
  return {s.total_derivative(p.a(), p.x()) - s.total_derivative(p.a_prime(), p.x_prime())};
}

std::vector<Expression> closure_residuals(const OneForm& f, const JetSpace& s) {
  std::vector<Expression> out;
  for (std::size_t i = 0; i < f.coefficients.size(); ++i)
    for (std::size_t j = i + 1; j < f.coefficients.size(); ++j)
      out.push_back(s.total_derivative(f.coefficients[i].second, f.coefficients[j].first) -
                    s.total_derivative(f.coefficients[j].second, f.coefficients[i].first));
  return out;
}

std::vector<Expression> lax_coefficients(const LaxPair& lp, CompatibilityRoute route) {
  return route == CompatibilityRoute::ZeroCurvature ? zero_curvature(lp) : compatibility_residual(lp);
}

Criterion c1() {
  Criterion c;
  c.timed("chh pair", 1, [] { return verify_conserved(cat::chh_pair(1), solve_leading(cat::chh(1))).holds; });
  c.timed("mchh pair", 1, [] { return verify_conserved(cat::mchh_pair(1), solve_leading(cat::mchh(1))).holds; });
  c.timed("chh dz0", 1, [] { return verify_closed(cat::chh_one_form(1), solve_leading(cat::chh(1))).holds; });
  c.timed("mchh dz0", 1, [] { return verify_closed(cat::mchh_one_form(1), solve_leading(cat::mchh(1))).holds; });
  return c;
}

Criterion c2() {
  Criterion c;
  for (int n = 1; n <= 3; ++n)
    c.timed("n=" + std::to_string(n), 60, [n] {
      PDESystem out = cat::chh_transform(n).apply(cat::chh(n));
      return systems_equivalent(out, cat::chh_three_variable(n)).holds && cat::verify_locality(out, n).holds;
    });
  return c;
}

Criterion c3() {
  Criterion c;
  for (int n = 1; n <= 3; ++n) c.timed("n=" + std::to_string(n), 60, [n] { return cat::verify_cbs(n).holds; });
  return c;
}

Criterion c4() {
  Criterion c;
  for (int n = 1; n <= 2; ++n)
    c.timed("n=" + std::to_string(n), 60, [n] {
      PDESystem out = cat::mchh_transform(n).apply(cat::mchh(n)).without_fields(cat::mchh_auxiliary_fields(n));
      return systems_equivalent(out, cat::mchh_three_variable(n)).holds && cat::verify_locality(out, n).holds &&
             cat::verify_mcbs_potential(n).holds;
    });
  return c;
}

Criterion c5() {
  Criterion c;
  for (int n = 1; n <= 2; ++n) {
    c.timed("miura n=" + std::to_string(n), 60, [n] { return cat::verify_miura(n, -1).holds; });
    c.timed("sign flip fails n=" + std::to_string(n), 60, [n] { return !cat::verify_miura(n, 1).holds; });
  }
  return c;
}

Criterion c6() {
  Criterion c;
  c.timed("closure reproduces transf1 (symbolic k)", 60, [] { return cat::verify_n0_closure(std::nullopt).holds; });
  c.timed("k^2 = k + 2 from elimination", 60, [] { return holds(cat::scenario("n0-integrability").run(1, kDefaultBudget)); });
  for (const char* s : {"n0-k2", "n0-k-1"}) c.timed(s, 60, [s] { return holds(cat::scenario(s).run(1, kDefaultBudget)); });
  return c;
}

Criterion c7() {
  Criterion c;
  for (const char* s : {"reduction", "dp", "vakhnenko"}) c.timed(s, 60, [s] { return holds(cat::scenario(s).run(1, kDefaultBudget)); });
  return c;
}

Criterion c8() {
  Criterion c;
  using R = CompatibilityRoute;
  for (long k : {2L, -1L})
    c.timed("n0 k=" + std::to_string(k), 120, [k] { return verify_yields(cat::n0_lax(Rational(k)), cat::n0_system(Rational(k))).holds; });
  c.timed("n0 k=0 fails", 120, [] { return !verify_yields(cat::n0_lax(Rational(0)), cat::n0_system(Rational(0))).holds; });
  for (int n = 1; n <= 2; ++n)
    c.timed("chh n=" + std::to_string(n), 120, [n] { return verify_yields(cat::chh_lax(n), cat::chh(n)).holds; });
  c.timed("mchh n=1", 120, [] { return verify_yields(cat::mchh_lax(1), cat::mchh(1), R::ZeroCurvature).holds; });
  c.timed("dp", 120, [] { return verify_yields(cat::dp_lax(), cat::dp_golden()).holds; });
  c.timed("vakhnenko", 120, [] { return verify_yields(cat::vakhnenko_lax(), cat::vakhnenko_golden()).holds; });
  c.timed("chh broken fails", 120, [] { return !verify_yields(cat::chh_lax(1, true), cat::chh(1)).holds; });
  c.timed("mchh broken fails", 120, [] { return !verify_yields(cat::mchh_lax(1, true), cat::mchh(1), R::ZeroCurvature).holds; });
  return c;
}

Criterion c9() {
  Criterion c;
  for (const char* s : {"chh-round-trip", "mchh-round-trip"}) c.timed(s, 60, [s] { return holds(cat::scenario(s).run(1, kDefaultBudget)); });
  return c;
}

Criterion c10() {
  Criterion c;
  std::uint64_t seed = oracle_seed();
  std::string where;
  using R = CompatibilityRoute;
  // conservation and closure
  {
    PDESystem chh = cat::chh(1), mchh = cat::mchh(1);
    SolvedSystem s = solve_leading(chh), m = solve_leading(mchh);
    c.expect(numeric_zero(conservation_residual(cat::chh_pair(1), chh.space()), s, seed), "chh conservation");
    c.expect(numeric_zero(conservation_residual(cat::mchh_pair(1), mchh.space()), m, seed), "mchh conservation");
    c.expect(numeric_zero(closure_residuals(cat::chh_one_form(1), chh.space()), s, seed), "chh closure");
    c.expect(numeric_zero(closure_residuals(cat::mchh_one_form(1), mchh.space()), m, seed), "mchh closure");
  }
  // three-variable forms and round trips
  for (int n = 1; n <= 3; ++n) {
    PDESystem out = cat::chh_transform(n).apply(cat::chh(n));
    c.expect(numerically_equivalent(out, cat::chh_three_variable(n), seed + n, &where), "three-variable " + where);
  }
  for (int n = 1; n <= 2; ++n) {
    PDESystem out = cat::mchh_transform(n).apply(cat::mchh(n)).without_fields(cat::mchh_auxiliary_fields(n));
    c.expect(numerically_equivalent(out, cat::mchh_three_variable(n), seed + n, &where), "modified three-variable " + where);
  }
  {
    ReciprocalTransform t = cat::chh_transform(1), m = cat::mchh_transform(1);
    c.expect(numerically_equivalent(t.inverse().apply(t.apply(cat::chh(1))), cat::chh(1), seed, &where), "chh round trip " + where);
    c.expect(numerically_equivalent(m.inverse().apply(m.apply(cat::mchh(1))), cat::mchh(1), seed, &where), "mchh round trip " + where);
  }
  // CBS and Miura
  for (int n = 1; n <= 3; ++n) {
    cat::CbsResult r = cat::cbs_check(n);
    std::vector<Expression> cbs;
    for (int i = 1; i <= n; ++i) cbs.push_back(cat::cbs_expression(r.solved.space(), i));
    c.expect(numeric_zero(cbs, r.solved, seed + n), "cbs n=" + std::to_string(n));
  }
  for (int n = 1; n <= 2; ++n) {
    cat::MiuraResult good = cat::miura_check(n, -1), bad = cat::miura_check(n, 1);
    c.expect(numeric_zero(good.unreduced, good.solved, seed + n), "miura n=" + std::to_string(n));
    c.expect(!numeric_zero(bad.unreduced, bad.solved, seed + n), "miura sign flip n=" + std::to_string(n) + " should be nonzero");
  }
  // n0 pipeline and reductions
  for (long k : {2L, -1L}) {
    c.expect(numerically_equivalent(cat::n0_pipeline(Rational(k)).transformed, cat::n0_transf_golden(Rational(k)), seed, &where), "n0 " + where);
    c.expect(numerically_equivalent(cat::n0_reduced_from_final(Rational(k)), cat::n0_reduced_golden(Rational(k + 1, 3), Rational(2 - k, 3)),
                                    seed, &where),
             "reduction " + where);
  }
  c.expect(numerically_equivalent(cat::dp_reduced_with_integral(), cat::dp_golden(), seed, &where), "dp " + where);
  c.expect(numerically_equivalent(cat::vakhnenko_reduced_with_integral(), cat::vakhnenko_golden(), seed, &where), "vakhnenko " + where);
  // Lax compatibility
  struct LaxCase {
    std::string name;
    LaxPair lp;
    PDESystem sys;
    R route;
    bool zero;
  };
  std::vector<LaxCase> lax{
      {"chh 1", cat::chh_lax(1), cat::chh(1), R::CrossDerivative, true},
      {"chh 2", cat::chh_lax(2), cat::chh(2), R::CrossDerivative, true},
      {"mchh 1", cat::mchh_lax(1), cat::mchh(1), R::ZeroCurvature, true},
      {"n0 2", cat::n0_lax(Rational(2)), cat::n0_system(Rational(2)), R::CrossDerivative, true},
      {"n0 -1", cat::n0_lax(Rational(-1)), cat::n0_system(Rational(-1)), R::CrossDerivative, true},
      {"dp", cat::dp_lax(), cat::dp_golden(), R::CrossDerivative, true},
      {"vakhnenko", cat::vakhnenko_lax(), cat::vakhnenko_golden(), R::CrossDerivative, true},
      {"n0 0", cat::n0_lax(Rational(0)), cat::n0_system(Rational(0)), R::CrossDerivative, false},
      {"chh broken", cat::chh_lax(1, true), cat::chh(1), R::CrossDerivative, false},
      {"mchh broken", cat::mchh_lax(1, true), cat::mchh(1), R::ZeroCurvature, false},
  };
  for (const auto& l : lax) {
    SolvedSystem s = system_with_constraints(l.lp, l.sys);
    bool z = numeric_zero(lax_coefficients(l.lp, l.route), s, seed);
    c.expect(z == l.zero, "lax " + l.name + (l.zero ? " nonzero" : " should be nonzero"));
  }
  // chain-rule rule sets on manufactured analytic data
  for (const auto& [name, t] : std::vector<std::pair<std::string, ReciprocalTransform>>{{"chh", cat::chh_transform(1)},
                                                                                           {"mchh", cat::mchh_transform(1)}}) {
    support::ChainRuleCheck r = support::chain_rule_check(t, 2, seed, 10, 1e-4L);
    std::ostringstream os;
    os << name << " chain rule: " << r.checked << " rule values, worst rel. error " << static_cast<double>(r.worst);
    c.details.push_back(os.str());
    c.expect(r.failures == 0 && r.checked >= 10, name + " chain rule " + r.first_failure);
  }
  return c;
}

Criterion c11() {
  Criterion c;
  auto t0 = Clock::now();
  support::ExprGen gen(1011);
  const JetSpace& s = gen.space();
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    Expression a = gen.rational(2), b = gen.rational(2), d = gen.rational(2);
    bool ok = (a + b) + d == a + (b + d) && (a * b) * d == a * (b * d) && a * b == b * a && a + b == b + a && a * (b + d) == a * b + a * d &&
              is_zero(a - a) && normalize(normalize(a)) == normalize(a);
    for (const char* v : {"x", "y"}) {
      auto D = [&](const Expression& e) { return s.total_derivative(e, v); };
      ok = ok && D(a * b) == D(a) * b + a * D(b) && D(a + d) == D(a) + D(d);
    }
    ok = ok && s.total_derivative(s.total_derivative(a, "x"), "y") == s.total_derivative(s.total_derivative(a, "y"), "x");
    if (!ok) ++bad;
  }
  double secs = seconds_since(t0);
  std::ostringstream os;
  os.precision(3);
  os << "1000 triples " << secs << "s";
  c.details.push_back(os.str());
  c.expect(bad == 0, std::to_string(bad) + " triples violate a law");
  c.expect(secs < 30, "exceeded 30s");
  return c;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Criterion()>>> all{
      {"conservation and closure", c1},
      {"chh to three-variable form, n = 1..3", c2},
      {"CBS from the potential, n = 1..3", c3},
      {"mchh to mCBS, n = 1, 2", c4},
      {"Miura map and sign-flip control", c5},
      {"n0 closure, integrability, final form", c6},
      {"reductions: reduced system, DP, Vakhnenko", c7},
      {"Lax compatibility and broken controls", c8},
      {"round trip chh(1), mchh(1)", c9},
      {"numeric oracles", c10},
      {"kernel properties", c11},
  };
  std::cout << "oracle seed " << oracle_seed() << "\n";
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto t0 = Clock::now();
    Criterion c;
    try {
      c = all[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.failures.push_back(std::string("threw ") + e.what());
    }
    char line[256];
    std::snprintf(line, sizeof line, "criterion %2zu %s  %-44s %8.2fs", i + 1, c.ok ? "PASS" : "FAIL", all[i].first.c_str(), seconds_since(t0));
    std::cout << line << "\n";
    for (const auto& d : c.details) std::cout << "    " << d << "\n";
    for (const auto& f : c.failures) std::cout << "    failed: " << f << "\n";
    if (!c.ok) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? 1 : 0;
}
