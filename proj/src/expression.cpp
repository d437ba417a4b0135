#include "recipro/expression.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "recipro/error.hpp"

namespace recipro {

namespace {

struct GeneratorTable {
  std::shared_mutex mu;
  std::unordered_map<AtomId, GeneratorInfo> info;
};

GeneratorTable& generators() {
  static GeneratorTable* t = new GeneratorTable();
  return *t;
}

AtomId register_generator(const std::string& key, GeneratorInfo info) {
  AtomId id = generator_atom(key);
  GeneratorTable& t = generators();
  std::unique_lock lock(t.mu);
  t.info.try_emplace(id, std::move(info));
  return id;
}

bool atom_is_relational(AtomId a) { return atom_info(a).kind == AtomKind::Generator && has_relation(a); }

bool has_relational(const Polynomial& p) {
  for (const auto& t : p.terms())
    for (const auto& f : t.mono.factors())
      if (atom_is_relational(f.first)) return true;
  return false;
}

std::vector<AtomId> relational_atoms(const Polynomial& p) {
  std::vector<AtomId> out;
  for (AtomId a : p.atoms())
    if (atom_is_relational(a)) out.push_back(a);
  return out;
}

Polynomial square_value(AtomId g) {
  const GeneratorInfo& info = generator_info(g);
  if (info.kind == GeneratorKind::ImaginaryUnit) return Polynomial(-1);
  return Polynomial::atom(info.base);
}

// every relation has the form g^2 = (generator-free polynomial), so one pass suffices
Polynomial reduce_relations(const Polynomial& p) {
  bool any = false;
  for (const auto& t : p.terms())
    for (const auto& [a, e] : t.mono.factors())
      if (e >= 2 && atom_is_relational(a)) any = true;
  if (!any) return p;
  std::vector<Term> plain;
  Polynomial acc;
  for (const auto& t : p.terms()) {
    Monomial rest;
    Polynomial factor(1);
    bool changed = false;
    for (const auto& [a, e] : t.mono.factors()) {
      if (e >= 2 && atom_is_relational(a)) {
        changed = true;
        factor = factor * square_value(a).pow(static_cast<unsigned>(e / 2));
        if (e % 2) rest = rest * Monomial::of(a);
      } else {
        rest = rest * Monomial::of(a, e);
      }
    }
    if (changed)
      acc = acc + factor.mul_term(rest, t.coef);
    else
      plain.push_back(t);
  }
  return Polynomial::from_terms(std::move(plain)) + acc;
}

Polynomial conjugate(const Polynomial& p, AtomId g) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) out.push_back({t.mono, t.mono.degree(g) % 2 ? Rational(-t.coef) : t.coef});
  return Polynomial::from_terms(std::move(out));
}

Expression make_canonical(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw DivisionByZeroExpression("denominator is identically zero");
  num = reduce_relations(num);
  den = reduce_relations(den);
  if (den.is_zero()) throw DivisionByZeroExpression("denominator vanishes modulo generator relations");
  for (;;) {
    auto gens = relational_atoms(den);
    if (gens.empty()) break;
    Polynomial c = conjugate(den, gens.front());
    num = reduce_relations(num * c);
    den = reduce_relations(den * c);
    if (den.is_zero()) throw DivisionByZeroExpression("denominator vanishes modulo generator relations");
  }
  return Expression::fraction(num, den);
}

}  // namespace

// fraction assumes generator-free den and reduced num; make_canonical establishes that
Expression Expression::fraction(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw DivisionByZeroExpression("denominator is identically zero");
  if (has_relational(den) || has_relational(num)) {
    bool reduced_num = reduce_relations(num) == num;
    if (has_relational(den) || !reduced_num) return make_canonical(num, den);
  }
  Expression r;
  if (num.is_zero()) return r;
  if (den.is_constant()) {
    Rational c = den.constant_value();
    r.num_ = num * Rational(1 / c);
    r.den_ = Polynomial(1);
    return r;
  }
  Polynomial g = gcd(num, den);
  if (g.is_one()) {
    r.num_ = num;
    r.den_ = den;
  } else {
    r.num_ = *num.divide_exact(g);
    r.den_ = *den.divide_exact(g);
  }
  Rational lc = r.den_.leading_coefficient();
  if (lc != 1) {
    Rational inv = 1 / lc;
    r.num_ = r.num_ * inv;
    r.den_ = r.den_ * inv;
  }
  return r;
}

Expression Expression::coprime_fraction(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw DivisionByZeroExpression("denominator is identically zero");
  Expression r;
  if (num.is_zero()) return r;
  Rational inv = 1 / den.leading_coefficient();
  r.num_ = num * inv;
  r.den_ = den * inv;
  return r;
}

Expression Expression::polynomial(const Polynomial& p) { return fraction(p, Polynomial(1)); }

Expression Expression::atom(AtomId a) {
  Expression r;
  r.num_ = Polynomial::atom(a);
  return r;
}

Rational Expression::constant_value() const {
  if (!is_constant()) throw InvalidArgument("expression is not constant");
  return num_.constant_value() / den_.constant_value();
}

bool Expression::is_atom() const {
  return den_.is_one() && num_.size() == 1 && num_.leading_term().coef == 1 && num_.leading_term().mono.factors().size() == 1 &&
         num_.leading_term().mono.factors()[0].second == 1;
}

AtomId Expression::as_atom() const {
  if (!is_atom()) throw InvalidArgument("expression is not a single atom");
  return num_.leading_term().mono.factors()[0].first;
}

Expression Expression::operator-() const {
  Expression r = *this;
  r.num_ = -r.num_;
  return r;
}

Expression Expression::operator+(const Expression& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  if (den_ == o.den_) {
    if (den_.is_one()) {
      Expression r;
      r.num_ = num_ + o.num_;
      return r;
    }
    return fraction(num_ + o.num_, den_);
  }
  if (den_.is_one() || o.den_.is_one()) {
    // gcd(a + c d, d) = gcd(a, d) = 1
    Expression r;
    if (den_.is_one()) {
      r.num_ = num_ * o.den_ + o.num_;
      r.den_ = o.den_;
    } else {
      r.num_ = num_ + o.num_ * den_;
      r.den_ = den_;
    }
    return r;
  }
  Polynomial g = gcd(den_, o.den_);
  if (g.is_one()) {
    Expression r;
    r.num_ = num_ * o.den_ + o.num_ * den_;
    if (r.num_.is_zero()) return Expression();
    r.den_ = den_ * o.den_;
    return r;
  }
  Polynomial b1 = *den_.divide_exact(g);
  Polynomial d1 = *o.den_.divide_exact(g);
  return fraction(num_ * d1 + o.num_ * b1, b1 * o.den_);
}

Expression Expression::operator-(const Expression& o) const { return *this + (-o); }

Expression Expression::operator*(const Expression& o) const {
  if (is_zero() || o.is_zero()) return Expression();
  if (o.is_constant()) {
    Expression r = *this;
    r.num_ = r.num_ * o.constant_value();
    return r;
  }
  if (is_constant()) return o * *this;
  Polynomial g1 = gcd(num_, o.den_);
  Polynomial g2 = gcd(o.num_, den_);
  Polynomial a = g1.is_one() ? num_ : *num_.divide_exact(g1);
  Polynomial d = g1.is_one() ? o.den_ : *o.den_.divide_exact(g1);
  Polynomial c = g2.is_one() ? o.num_ : *o.num_.divide_exact(g2);
  Polynomial b = g2.is_one() ? den_ : *den_.divide_exact(g2);
  Polynomial n = a * c;
  Polynomial m = b * d;
  if (has_relational(a) && has_relational(c)) return make_canonical(n, m);
  Expression r;
  r.num_ = std::move(n);
  r.den_ = std::move(m);
  return r;
}

Expression Expression::operator/(const Expression& o) const {
  if (o.is_zero()) throw DivisionByZeroExpression("division by the zero expression");
  if (is_zero()) return Expression();
  if (has_relational(o.num_)) return make_canonical(num_ * o.den_, den_ * o.num_);
  Polynomial g1 = gcd(num_, o.num_);
  Polynomial g2 = gcd(o.den_, den_);
  Polynomial a = g1.is_one() ? num_ : *num_.divide_exact(g1);
  Polynomial c = g1.is_one() ? o.num_ : *o.num_.divide_exact(g1);
  Polynomial d = g2.is_one() ? o.den_ : *o.den_.divide_exact(g2);
  Polynomial b = g2.is_one() ? den_ : *den_.divide_exact(g2);
  Expression r;
  r.num_ = a * d;
  r.den_ = b * c;
  Rational lc = r.den_.leading_coefficient();
  if (lc != 1) {
    Rational inv = 1 / lc;
    r.num_ = r.num_ * inv;
    r.den_ = r.den_ * inv;
  }
  return r;
}

std::vector<AtomId> Expression::atoms() const {
  std::vector<AtomId> a = num_.atoms();
  std::vector<AtomId> b = den_.atoms();
  std::vector<AtomId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Expression pow(const Expression& e, int k) {
  if (k == 0) return Expression(1);
  if (k < 0) return Expression(1) / pow(e, -k);
  if (e.is_polynomial()) return Expression::fraction(e.num().pow(static_cast<unsigned>(k)), Polynomial(1));
  return Expression::fraction(e.num().pow(static_cast<unsigned>(k)), e.den().pow(static_cast<unsigned>(k)));
}

namespace {

struct Fraction {
  Polynomial num;
  Polynomial den;
};

Fraction substitute_poly(const Polynomial& p, const SubstitutionMap& rules) {
  std::vector<AtomId> hit;
  for (AtomId a : p.atoms())
    if (rules.count(a)) hit.push_back(a);
  if (hit.empty()) return {p, Polynomial(1)};
  std::map<AtomId, int> maxdeg;
  for (AtomId a : hit) maxdeg[a] = p.degree_in(a);
  std::map<std::pair<AtomId, int>, Polynomial> num_pow, den_pow;
  auto npow = [&](AtomId a, int e) -> const Polynomial& {
    auto key = std::make_pair(a, e);
    auto it = num_pow.find(key);
    if (it != num_pow.end()) return it->second;
    return num_pow.emplace(key, rules.at(a).num().pow(static_cast<unsigned>(e))).first->second;
  };
  auto dpow = [&](AtomId a, int e) -> const Polynomial& {
    auto key = std::make_pair(a, e);
    auto it = den_pow.find(key);
    if (it != den_pow.end()) return it->second;
    return den_pow.emplace(key, rules.at(a).den().pow(static_cast<unsigned>(e))).first->second;
  };
  Polynomial num;
  for (const auto& t : p.terms()) {
    Monomial rest;
    Polynomial factor(1);
    for (const auto& [a, e] : t.mono.factors()) {
      auto it = maxdeg.find(a);
      if (it == maxdeg.end()) {
        rest = rest * Monomial::of(a, e);
      } else {
        factor = factor * npow(a, e);
        if (it->second > e) factor = factor * dpow(a, it->second - e);
      }
    }
    for (const auto& [a, m] : maxdeg)
      if (t.mono.degree(a) == 0) factor = factor * dpow(a, m);
    num = num + factor.mul_term(rest, t.coef);
  }
  Polynomial den(1);
  for (const auto& [a, m] : maxdeg) den = den * dpow(a, m);
  return {num, den};
}

}  // namespace

Expression substitute(const Expression& e, const SubstitutionMap& rules) {
  if (rules.empty()) return e;
  Fraction n = substitute_poly(e.num(), rules);
  if (n.num.is_zero()) return Expression();
  if (e.den().is_one()) return make_canonical(n.num, n.den);
  Fraction d = substitute_poly(e.den(), rules);
  if (d.num.is_zero() || make_canonical(d.num, Polynomial(1)).is_zero())
    throw DivisionByZeroExpression("substitution makes the denominator vanish");
  return make_canonical(n.num * d.den, n.den * d.num);
}

// ---- generators ----

Expression imaginary_unit() {
  static const AtomId id = register_generator("I", {GeneratorKind::ImaginaryUnit, 0, Expression()});
  return Expression::atom(id);
}

Expression sqrt_of(AtomId base) {
  std::string key = "sqrt(" + atom_text(base) + ")#" + std::to_string(base);
  return Expression::atom(register_generator(key, {GeneratorKind::SquareRoot, base, Expression()}));
}

Expression power_of(AtomId base, const Expression& exponent) {
  if (!exponent.is_constant()) {
    for (AtomId a : exponent.atoms())
      if (atom_info(a).kind != AtomKind::Parameter) throw InvalidArgument("power exponent must be built from parameters");
  }
  if (exponent.is_constant()) {
    Rational q = exponent.constant_value();
    if (q.get_den() == 1) return pow(Expression::atom(base), static_cast<int>(q.get_num().get_si()));
    if (q.get_den() == 2) {
      Rational k = (q - Rational(1, 2));
      return sqrt_of(base) * pow(Expression::atom(base), static_cast<int>(k.get_num().get_si()));
    }
  }
  if (exponent.is_polynomial()) {
    // integer constant parts become ordinary powers so a^(k-2) and a^k share one generator
    Rational c = 0;
    for (const Term& t : exponent.num().terms())
      if (t.mono.is_one()) c = t.coef;
    if (c != 0 && c.get_den() == 1)
      return power_of(base, exponent - Expression(c)) * pow(Expression::atom(base), static_cast<int>(c.get_num().get_si()));
    // e = n * p with n an integer and p of coprime numerators and positive leading term: a^e = (a^p)^n
    mpz_class g = 0, l = 1;
    for (const Term& t : exponent.num().terms()) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.get_den_mpz_t());
    }
    mpz_class n = g;
    if (exponent.num().leading_coefficient() < 0) n = -n;
    if (n != 1) {
      Expression primitive = exponent / Expression(Rational(n));
      return pow(power_of(base, primitive), static_cast<int>(n.get_si()));
    }
  }
  std::string key = "pow(" + atom_text(base) + ", " + to_text(exponent) + ")#" + std::to_string(base);
  return Expression::atom(register_generator(key, {GeneratorKind::Power, base, exponent}));
}

const GeneratorInfo& generator_info(AtomId g) {
  GeneratorTable& t = generators();
  std::shared_lock lock(t.mu);
  auto it = t.info.find(g);
  if (it == t.info.end()) throw InvalidArgument("not a generator atom");
  return it->second;
}

bool has_relation(AtomId g) { return generator_info(g).kind != GeneratorKind::Power; }

Expression generator_derivative(AtomId g, const Expression& base_derivative) {
  const GeneratorInfo& info = generator_info(g);
  switch (info.kind) {
    case GeneratorKind::ImaginaryUnit:
      return Expression();
    case GeneratorKind::SquareRoot:
      return Expression::atom(g) * base_derivative / (Expression(2) * Expression::atom(info.base));
    case GeneratorKind::Power:
      return info.exponent * Expression::atom(g) * base_derivative / Expression::atom(info.base);
  }
  return Expression();
}

// ---- evaluation ----

double Assignment::get(AtomId a) const {
  auto it = values_.find(a);
  if (it == values_.end()) throw MissingAtom("no value for atom " + atom_text(a));
  return it->second;
}

Complex generator_value(AtomId g, const AtomValueFn& value) {
  const GeneratorInfo& info = generator_info(g);
  switch (info.kind) {
    case GeneratorKind::ImaginaryUnit:
      return Complex(0, 1);
    case GeneratorKind::SquareRoot:
      return std::sqrt(value(info.base));
    case GeneratorKind::Power:
      return std::pow(value(info.base), eval_complex(info.exponent, value));
  }
  return 0;
}

Complex eval_polynomial(const Polynomial& p, const AtomValueFn& value) {
  std::unordered_map<AtomId, Complex> cache;
  auto v = [&](AtomId a) -> Complex {
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    Complex x = atom_info(a).kind == AtomKind::Generator ? generator_value(a, value) : value(a);
    cache.emplace(a, x);
    return x;
  };
  Complex sum = 0;
  for (const auto& t : p.terms()) {
    Complex term = static_cast<long double>(t.coef.get_num().get_d()) / static_cast<long double>(t.coef.get_den().get_d());
    for (const auto& [a, e] : t.mono.factors()) {
      Complex x = v(a);
      Complex px = 1;
      for (int i = 0; i < e; ++i) px *= x;
      term *= px;
    }
    sum += term;
  }
  return sum;
}

Complex eval_complex(const Expression& e, const AtomValueFn& value) {
  Complex d = eval_polynomial(e.den(), value);
  if (std::abs(d) < 1e-9L) throw NumericPoleError("denominator magnitude below 1e-9");
  return eval_polynomial(e.num(), value) / d;
}

Complex eval_complex(const Expression& e, const Assignment& a) {
  return eval_complex(e, [&](AtomId id) { return Complex(a.get(id)); });
}

double eval_numeric(const Expression& e, const Assignment& a) { return static_cast<double>(eval_complex(e, a).real()); }

}  // namespace recipro
