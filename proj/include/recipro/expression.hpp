#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "recipro/atom.hpp"
#include "recipro/polynomial.hpp"

namespace recipro {

// Canonical rational function num/den: gcd(num, den) = 1, den monic, den free of
// relational generators, num reduced modulo the generator relations.
class Expression {
 public:
  Expression() : den_(1) {}
  Expression(int v) : Expression(Rational(v)) {}
  Expression(long v) : Expression(Rational(v)) {}
  Expression(const Rational& v) : num_(v), den_(1) {}
  static Expression atom(AtomId a);
  static Expression fraction(const Polynomial& num, const Polynomial& den);
  static Expression polynomial(const Polynomial& p);
  // caller guarantees gcd(num, den) = 1 and den generator-free; only den is made monic
  static Expression coprime_fraction(const Polynomial& num, const Polynomial& den);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_one(); }
  Rational constant_value() const;
  // single atom with coefficient one
  bool is_atom() const;
  AtomId as_atom() const;

  Expression operator-() const;
  Expression operator+(const Expression& o) const;
  Expression operator-(const Expression& o) const;
  Expression operator*(const Expression& o) const;
  Expression operator/(const Expression& o) const;
  Expression& operator+=(const Expression& o) { return *this = *this + o; }
  Expression& operator-=(const Expression& o) { return *this = *this - o; }
  Expression& operator*=(const Expression& o) { return *this = *this * o; }
  Expression& operator/=(const Expression& o) { return *this = *this / o; }
  bool operator==(const Expression& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Expression& o) const { return !(*this == o); }

  std::vector<AtomId> atoms() const;
  bool contains(AtomId a) const { return num_.contains(a) || den_.contains(a); }
  std::size_t hash() const { return num_.hash() * 7 + den_.hash(); }

 private:
  Polynomial num_;
  Polynomial den_;
};

inline Expression operator+(long a, const Expression& e) { return Expression(a) + e; }
inline Expression operator-(long a, const Expression& e) { return Expression(a) - e; }
inline Expression operator*(long a, const Expression& e) { return Expression(a) * e; }
inline Expression operator/(long a, const Expression& e) { return Expression(a) / e; }

Expression pow(const Expression& e, int k);
inline Expression normalize(const Expression& e) { return e; }
inline bool is_zero(const Expression& e) { return e.is_zero(); }

using SubstitutionMap = std::unordered_map<AtomId, Expression>;
// simultaneous substitution; right-hand sides are not rescanned
Expression substitute(const Expression& e, const SubstitutionMap& rules);

// ---- algebraic generators ----
enum class GeneratorKind { ImaginaryUnit, SquareRoot, Power };

struct GeneratorInfo {
  GeneratorKind kind;
  AtomId base = 0;      // SquareRoot, Power
  Expression exponent;  // Power
};

Expression imaginary_unit();
Expression sqrt_of(AtomId base);
Expression power_of(AtomId base, const Expression& exponent);
const GeneratorInfo& generator_info(AtomId g);
bool has_relation(AtomId g);

// derivative of a generator atom given the derivative of its base
Expression generator_derivative(AtomId g, const Expression& base_derivative);

// ---- numeric evaluation ----
class Assignment {
 public:
  Assignment() = default;
  void set(AtomId a, double v) { values_[a] = v; }
  bool has(AtomId a) const { return values_.count(a) > 0; }
  double get(AtomId a) const;
  const std::unordered_map<AtomId, double>& values() const { return values_; }

 private:
  std::unordered_map<AtomId, double> values_;
};

using Complex = std::complex<long double>;
using AtomValueFn = std::function<Complex(AtomId)>;

Complex eval_complex(const Expression& e, const AtomValueFn& value);
Complex eval_complex(const Expression& e, const Assignment& a);
double eval_numeric(const Expression& e, const Assignment& a);
Complex eval_polynomial(const Polynomial& p, const AtomValueFn& value);
// value of a generator atom from the values of its base
Complex generator_value(AtomId g, const AtomValueFn& value);

// ---- rendering ----
std::string atom_text(AtomId a);
std::string atom_latex(AtomId a);
std::string latex_name(const std::string& name);
std::string to_text(const Expression& e);
std::string to_latex(const Expression& e);

}  // namespace recipro
