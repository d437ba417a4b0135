#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "recipro/jet_space.hpp"
#include "recipro/transform.hpp"
#include "recipro/numeric.hpp"

namespace recipro {
inline void PrintTo(const Expression& e, std::ostream* os) { *os << to_text(e); }
}  // namespace recipro

namespace support {

using recipro::AtomId;
using recipro::Expression;
using recipro::JetSpace;

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(recipro::oracle_seed() + salt); }

// Random rational expressions over a small jet space: x, y; fields u, v; parameter a.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t salt = 0, int max_order = 6)
      : rng_(rng(salt)), space_(JetSpace::declare({"x", "y"}, {"u", "v"}, max_order, {"a"})) {
    for (const char* f : {"u", "v"})
      for (AtomId j : space_.jets(f, 2)) leaves_.push_back(Expression::atom(j));
    leaves_.push_back(space_.var("x"));
    leaves_.push_back(space_.var("y"));
    leaves_.push_back(space_.param("a"));
  }

  const JetSpace& space() const { return space_; }

  Expression leaf() { return leaves_[pick(leaves_.size())]; }
  Expression constant() {
    long n = static_cast<long>(pick(7)) - 3;
    long d = static_cast<long>(pick(3)) + 1;
    return Expression(recipro::Rational(n, d));
  }

  Expression polynomial(int depth) {
    if (depth <= 0) return pick(4) == 0 ? constant() : leaf();
    switch (pick(3)) {
      case 0:
        return polynomial(depth - 1) + polynomial(depth - 1);
      case 1:
        return polynomial(depth - 1) * polynomial(depth - 1);
      default:
        return constant() * polynomial(depth - 1) - leaf();
    }
  }

  // polynomial or polynomial / (nonzero polynomial)
  Expression rational(int depth) {
    Expression p = polynomial(depth);
    if (pick(3) != 0) return p;
    Expression d = leaf() * leaf() + Expression(static_cast<long>(pick(3)) + 1);
    return p / d;
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  std::mt19937_64 rng_;
  JetSpace space_;
  std::vector<Expression> leaves_;
};

// atoms uniform in [1, 2]; generators evaluated from their bases
inline recipro::Complex eval_random(const Expression& e, std::mt19937_64& g, std::map<AtomId, double>& values) {
  std::uniform_real_distribution<double> d(1.0, 2.0);
  std::function<recipro::Complex(AtomId)> value = [&](AtomId a) -> recipro::Complex {
    if (recipro::atom_info(a).kind == recipro::AtomKind::Generator) return recipro::generator_value(a, value);
    auto it = values.find(a);
    if (it == values.end()) it = values.emplace(a, d(g)).first;
    return it->second;
  };
  return recipro::eval_complex(e, value);
}

// f(p) = l . p + sum_k c_k exp(r_k . p); every partial derivative is available in closed form
struct ExpSum {
  std::vector<std::pair<long double, std::vector<long double>>> terms;
  std::vector<long double> linear;

  long double operator()(const std::vector<long double>& p, const std::vector<int>& d = {}) const {
    long double s = 0;
    int order = 0, dir = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] > 0) {
        order += d[i];
        dir = static_cast<int>(i);
      }
    for (std::size_t i = 0; i < linear.size(); ++i) {
      if (order == 0) s += linear[i] * p[i];
      if (order == 1 && dir == static_cast<int>(i)) s += linear[i];
    }
    for (const auto& [c, r] : terms) {
      long double t = c, arg = 0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        arg += r[i] * p[i];
        int k = i < d.size() ? d[i] : 0;
        for (int j = 0; j < k; ++j) t *= r[i];
      }
      s += t * std::exp(arg);
    }
    return s;
  }
};

inline ExpSum random_expsum(std::mt19937_64& g, std::size_t dim, std::size_t terms, long double scale = 1) {
  std::uniform_real_distribution<double> c(-1.0, 1.0), r(-0.7, 0.7);
  ExpSum f;
  for (std::size_t k = 0; k < terms; ++k) {
    std::vector<long double> rate(dim);
    for (auto& x : rate) x = r(g);
    f.terms.push_back({scale * c(g), rate});
  }
  return f;
}

// evaluates atoms of `space` at point p with fields given analytically
inline recipro::AtomValueFn analytic_values(const JetSpace& space, const std::map<std::string, ExpSum>& fields,
                                            const std::vector<long double>& p, const std::map<std::string, long double>& params = {}) {
  return [&space, &fields, p, params](AtomId a) -> recipro::Complex {
    const recipro::AtomInfo& info = recipro::atom_info(a);
    const auto& iv = space.independents();
    switch (info.kind) {
      case recipro::AtomKind::Independent:
        for (std::size_t i = 0; i < iv.size(); ++i)
          if (iv[i] == info.name) return p[i];
        break;
      case recipro::AtomKind::Parameter:
        return params.at(info.name);
      case recipro::AtomKind::Jet: {
        std::vector<int> d(iv.size(), 0);
        for (std::size_t i = 0; i < iv.size(); ++i) d[i] = info.index.count(recipro::intern_var(iv[i]));
        return fields.at(info.name)(p, d);
      }
      case recipro::AtomKind::Generator:
        break;
    }
    throw std::runtime_error("no value for " + recipro::atom_text(a));
  };
}

// nested central differences of f along the multi-index d
long double central(const std::function<long double(const std::vector<long double>&)>& f, std::vector<long double> p, std::vector<int> d,
                    long double h) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0) continue;
    --d[i];
    std::vector<long double> lo = p, hi = p;
    lo[i] -= h;
    hi[i] += h;
    return (central(f, hi, d, h) - central(f, lo, d, h)) / (2 * h);
  }
  return f(p);
}

// Source-side functions of a transform x_p = X(z), other variables renamed. Fields are
// analytic in z; source values come from inverting X along the pivot by Newton's method.
struct Manufactured {
  const recipro::ReciprocalTransform& t;
  std::map<std::string, ExpSum> fields;  // includes the new field
  std::vector<std::string> source_vars, target_vars;

  int pivot_index() const {
    for (std::size_t i = 0; i < target_vars.size(); ++i)
      if (target_vars[i] == t.data().target_pivot) return static_cast<int>(i);
    return -1;
  }

  std::vector<long double> target_point(const std::vector<long double>& src) const {
    std::vector<long double> z(target_vars.size(), 0);
    int ip = pivot_index();
    long double x = 0;
    for (std::size_t i = 0; i < source_vars.size(); ++i) {
      if (source_vars[i] == t.data().source_pivot) {
        x = src[i];
        continue;
      }
      std::string tv = t.target_var(source_vars[i]);
      for (std::size_t j = 0; j < target_vars.size(); ++j)
        if (target_vars[j] == tv) z[j] = src[i];
    }
    const auto& X = fields.at(t.data().new_field);
    z[ip] = x;
    std::vector<int> dp(target_vars.size(), 0);
    dp[ip] = 1;
    for (int it = 0; it < 60; ++it) {
      long double step = (X(z) - x) / X(z, dp);
      z[ip] -= step;
      if (std::abs(step) < 1e-18L) break;
    }
    return z;
  }

  std::vector<long double> source_point(const std::vector<long double>& z) const {
    std::vector<long double> src(source_vars.size());
    for (std::size_t i = 0; i < source_vars.size(); ++i) {
      if (source_vars[i] == t.data().source_pivot) {
        src[i] = fields.at(t.data().new_field)(z);
        continue;
      }
      std::string tv = t.target_var(source_vars[i]);
      for (std::size_t j = 0; j < target_vars.size(); ++j)
        if (target_vars[j] == tv) src[i] = z[j];
    }
    return src;
  }
};

struct ChainRuleCheck {
  int checked = 0;
  int failures = 0;
  long double worst = 0;  // largest relative error
  std::string first_failure;
};

// every rule of the given order against central differences of manufactured source functions, rel. tol `tol`
inline ChainRuleCheck chain_rule_check(const recipro::ReciprocalTransform& t, int order, std::uint64_t salt, int points, long double h,
                                       long double tol = 1e-4L) {
  using namespace recipro;
  auto g = rng(salt);
  JetSpace rs = t.rule_space();
  Manufactured m{t, {}, t.source().independents(), t.target().independents()};
  std::size_t dim = m.target_vars.size();
  ExpSum X = random_expsum(g, dim, 3, 0.1L);
  X.linear.assign(dim, 0);
  X.linear[m.pivot_index()] = 1;
  m.fields[t.data().new_field] = X;
  for (const auto& f : t.source().dependents())
    if (rs.has_field(f)) m.fields[f] = random_expsum(g, dim, 3);
  auto rules = t.derivative_rules(order);
  std::uniform_real_distribution<double> pt(0.2, 0.8);
  ChainRuleCheck out;
  for (int k = 0; k < points; ++k) {
    std::vector<long double> z(dim);
    for (auto& c : z) c = pt(g);
    std::vector<long double> src = m.source_point(z);
    auto values = analytic_values(rs, m.fields, z);
    for (const auto& [j, e] : rules) {
      const AtomInfo& info = atom_info(j);
      std::vector<int> d(m.source_vars.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = info.index.count(intern_var(m.source_vars[i]));
      const auto& F = m.fields.at(info.name);
      auto f = [&](const std::vector<long double>& s) { return F(m.target_point(s)); };
      long double fd = central(f, src, d, h);
      long double exact = std::real(eval_complex(e, values));
      long double rel = std::abs(exact - fd) / std::max<long double>(1, std::abs(exact));
      out.worst = std::max(out.worst, rel);
      if (!(rel <= tol)) {
        if (out.failures++ == 0) out.first_failure = atom_text(j) + " at point " + std::to_string(k);
      }
      ++out.checked;
    }
  }
  return out;
}

}  // namespace support
