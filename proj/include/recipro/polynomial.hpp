#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recipro/atom.hpp"

namespace recipro {

using Rational = mpq_class;

// Power product of atoms, factors sorted by AtomId, exponents positive.
class Monomial {
 public:
  Monomial() = default;
  static Monomial of(AtomId a, int e = 1);

  const std::vector<std::pair<AtomId, int>>& factors() const { return f_; }
  bool is_one() const { return f_.empty(); }
  int degree(AtomId a) const;
  int total_degree() const;
  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  Monomial divide(const Monomial& other) const;  // requires divides
  Monomial gcd(const Monomial& other) const;
  Monomial without(AtomId a) const;
  std::size_t hash() const;

  bool operator==(const Monomial& o) const { return f_ == o.f_; }
  // lex order, smaller AtomId is more significant
  static int compare(const Monomial& a, const Monomial& b);

 private:
  std::vector<std::pair<AtomId, int>> f_;
  friend class Polynomial;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
  Monomial mono;
  Rational coef;
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const Rational& c);
  explicit Polynomial(long c) : Polynomial(Rational(c)) {}
  static Polynomial atom(AtomId a, int e = 1);
  static Polynomial from_terms(std::vector<Term> terms);
  static Polynomial term(const Monomial& m, const Rational& c);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  bool is_monomial() const { return terms_.size() == 1; }
  Rational constant_value() const;
  const Term& leading_term() const { return terms_.front(); }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial mul_term(const Monomial& m, const Rational& c) const;
  Polynomial pow(unsigned e) const;
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  bool operator==(const Polynomial& o) const;
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  std::optional<Polynomial> divide_exact(const Polynomial& d) const;
  Polynomial divide_monomial(const Monomial& m) const;  // requires divisibility
  Polynomial monic() const;
  Rational leading_coefficient() const { return terms_.empty() ? Rational(0) : terms_.front().coef; }

  int degree_in(AtomId a) const;
  std::vector<Polynomial> coefficients_in(AtomId a) const;
  static Polynomial from_coefficients(AtomId a, const std::vector<Polynomial>& coeffs);
  Polynomial partial(AtomId a) const;
  Monomial monomial_content() const;
  std::vector<AtomId> atoms() const;
  bool contains(AtomId a) const;
  std::size_t hash() const;

 private:
  std::vector<std::pair<AtomId, int>> monomial_degrees_upper() const;
  std::vector<Term> terms_;  // strictly decreasing monomials, nonzero coefficients
};

Polynomial gcd(const Polynomial& a, const Polynomial& b);

}  // namespace recipro
