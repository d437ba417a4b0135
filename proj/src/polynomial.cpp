#include "recipro/polynomial.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <unordered_map>

namespace recipro {

Monomial Monomial::of(AtomId a, int e) {
  Monomial m;
  if (e > 0) m.f_.emplace_back(a, e);
  return m;
}

int Monomial::degree(AtomId a) const {
  for (const auto& [b, e] : f_) {
    if (b == a) return e;
    if (b > a) break;
  }
  return 0;
}

int Monomial::total_degree() const {
  int s = 0;
  for (const auto& f : f_) s += f.second;
  return s;
}

bool Monomial::divides(const Monomial& other) const {
  auto it = other.f_.begin();
  for (const auto& [a, e] : f_) {
    while (it != other.f_.end() && it->first < a) ++it;
    if (it == other.f_.end() || it->first != a || it->second < e) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.f_.reserve(f_.size() + o.f_.size());
  auto i = f_.begin();
  auto j = o.f_.begin();
  while (i != f_.end() && j != o.f_.end()) {
    if (i->first < j->first) {
      r.f_.push_back(*i++);
    } else if (j->first < i->first) {
      r.f_.push_back(*j++);
    } else {
      r.f_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  r.f_.insert(r.f_.end(), i, f_.end());
  r.f_.insert(r.f_.end(), j, o.f_.end());
  return r;
}

Monomial Monomial::divide(const Monomial& o) const {
  Monomial r;
  auto j = o.f_.begin();
  for (const auto& [a, e] : f_) {
    int sub = 0;
    if (j != o.f_.end() && j->first == a) sub = (j++)->second;
    if (e - sub > 0) r.f_.emplace_back(a, e - sub);
  }
  return r;
}

Monomial Monomial::gcd(const Monomial& o) const {
  Monomial r;
  auto j = o.f_.begin();
  for (const auto& [a, e] : f_) {
    while (j != o.f_.end() && j->first < a) ++j;
    if (j != o.f_.end() && j->first == a) r.f_.emplace_back(a, std::min(e, j->second));
  }
  return r;
}

Monomial Monomial::without(AtomId a) const {
  Monomial r;
  for (const auto& f : f_)
    if (f.first != a) r.f_.push_back(f);
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (const auto& [a, e] : f_) {
    h ^= (static_cast<std::size_t>(a) << 8) ^ static_cast<std::size_t>(e);
    h *= 1099511628211ull;
  }
  return h;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
  auto i = a.f_.begin();
  auto j = b.f_.begin();
  while (i != a.f_.end() && j != b.f_.end()) {
    if (i->first != j->first) return i->first < j->first ? 1 : -1;
    if (i->second != j->second) return i->second > j->second ? 1 : -1;
    ++i;
    ++j;
  }
  if (i != a.f_.end()) return 1;
  if (j != b.f_.end()) return -1;
  return 0;
}

namespace {

struct DescendingMono {
  bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::compare(a, b) > 0; }
};

}  // namespace

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) {
    terms_.push_back({Monomial(), c});
    terms_.back().coef.canonicalize();
  }
}

Polynomial Polynomial::atom(AtomId a, int e) { return term(Monomial::of(a, e), 1); }

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (c != 0) {
    p.terms_.push_back({m, c});
    p.terms_.back().coef.canonicalize();
  }
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  for (auto& t : terms) t.coef.canonicalize();
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return Monomial::compare(a.mono, b.mono) > 0; });
  Polynomial p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
      if (p.terms_.back().coef == 0) p.terms_.pop_back();
    } else if (t.coef != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

bool Polynomial::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

bool Polynomial::is_one() const { return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coef == 1; }

Rational Polynomial::constant_value() const {
  if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coef;
  return 0;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return o;
  Polynomial r;
  r.terms_.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin();
  auto j = o.terms_.begin();
  while (i != terms_.end() && j != o.terms_.end()) {
    int c = Monomial::compare(i->mono, j->mono);
    if (c > 0) {
      r.terms_.push_back(*i++);
    } else if (c < 0) {
      r.terms_.push_back(*j++);
    } else {
      Rational s = i->coef + j->coef;
      if (s != 0) r.terms_.push_back({i->mono, s});
      ++i;
      ++j;
    }
  }
  r.terms_.insert(r.terms_.end(), i, terms_.end());
  r.terms_.insert(r.terms_.end(), j, o.terms_.end());
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Rational& c) const {
  Rational cc = c;
  cc.canonicalize();
  if (cc == 0) return Polynomial();
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef *= cc;
  return r;
}

Polynomial Polynomial::mul_term(const Monomial& m, const Rational& c) const {
  Rational cc = c;
  cc.canonicalize();
  if (cc == 0) return Polynomial();
  Polynomial r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * cc});
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (terms_.empty() || o.terms_.empty()) return Polynomial();
  if (o.terms_.size() == 1) return mul_term(o.terms_[0].mono, o.terms_[0].coef);
  if (terms_.size() == 1) return o.mul_term(terms_[0].mono, terms_[0].coef);
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(terms_.size() * o.terms_.size());
  Rational prod;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      prod = a.coef * b.coef;
      auto [it, inserted] = acc.try_emplace(a.mono * b.mono, prod);
      if (!inserted) it->second += prod;
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) out.push_back({m, c});
  std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return Monomial::compare(x.mono, y.mono) > 0; });
  Polynomial r;
  r.terms_ = std::move(out);
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].coef != o.terms_[i].coef || !(terms_[i].mono == o.terms_[i].mono)) return false;
  return true;
}

Polynomial Polynomial::divide_monomial(const Monomial& m) const {
  if (m.is_one()) return *this;
  Polynomial r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono.divide(m), t.coef});
  return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& d) const {
  if (d.is_zero()) return std::nullopt;
  if (is_zero()) return Polynomial();
  if (d.terms_.size() == 1) {
    const Term& dt = d.terms_[0];
    Rational inv = 1 / dt.coef;
    Polynomial r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!dt.mono.divides(t.mono)) return std::nullopt;
      r.terms_.push_back({t.mono.divide(dt.mono), t.coef * inv});
    }
    return r;
  }
  for (const auto& [a, e] : d.monomial_degrees_upper())
    if (degree_in(a) < e) return std::nullopt;
  std::map<Monomial, Rational, DescendingMono> rem;
  for (const auto& t : terms_) rem.emplace(t.mono, t.coef);
  const Term& lt = d.terms_.front();
  std::vector<Term> q;
  while (!rem.empty()) {
    auto top = rem.begin();
    if (!lt.mono.divides(top->first)) return std::nullopt;
    Monomial qm = top->first.divide(lt.mono);
    Rational qc = top->second / lt.coef;
    for (const auto& t : d.terms_) {
      Monomial m = t.mono * qm;
      auto [it, inserted] = rem.try_emplace(m, -t.coef * qc);
      if (!inserted) {
        it->second -= t.coef * qc;
        if (it->second == 0) rem.erase(it);
      }
    }
    q.push_back({std::move(qm), std::move(qc)});
  }
  Polynomial r;
  r.terms_ = std::move(q);
  return r;
}

std::vector<std::pair<AtomId, int>> Polynomial::monomial_degrees_upper() const {
  std::map<AtomId, int> deg;
  for (const auto& t : terms_)
    for (const auto& [a, e] : t.mono.factors()) {
      int& d = deg[a];
      d = std::max(d, e);
    }
  return {deg.begin(), deg.end()};
}

Polynomial Polynomial::monic() const {
  if (terms_.empty() || terms_.front().coef == 1) return *this;
  return *this * Rational(1 / terms_.front().coef);
}

int Polynomial::degree_in(AtomId a) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree(a));
  return d;
}

std::vector<Polynomial> Polynomial::coefficients_in(AtomId a) const {
  std::vector<std::vector<Term>> buckets(degree_in(a) + 1);
  for (const auto& t : terms_) {
    int e = t.mono.degree(a);
    buckets[e].push_back({e > 0 ? t.mono.without(a) : t.mono, t.coef});
  }
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) {
    Polynomial p;
    p.terms_ = std::move(b);  // removing one atom keeps relative order
    out.push_back(std::move(p));
  }
  return out;
}

Polynomial Polynomial::from_coefficients(AtomId a, const std::vector<Polynomial>& coeffs) {
  Polynomial r;
  for (std::size_t e = 0; e < coeffs.size(); ++e)
    if (!coeffs[e].is_zero()) r = r + coeffs[e].mul_term(Monomial::of(a, static_cast<int>(e)), 1);
  return r;
}

Polynomial Polynomial::partial(AtomId a) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    int e = t.mono.degree(a);
    if (e == 0) continue;
    Monomial m = t.mono.without(a);
    if (e > 1) m = m * Monomial::of(a, e - 1);
    out.push_back({std::move(m), t.coef * e});
  }
  Polynomial r;
  r.terms_ = std::move(out);  // d/da preserves the lex order among surviving terms
  return r;
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty()) return Monomial();
  Monomial g = terms_.front().mono;
  for (const auto& t : terms_) {
    if (g.is_one()) break;
    g = g.gcd(t.mono);
  }
  return g;
}

std::vector<AtomId> Polynomial::atoms() const {
  std::vector<AtomId> out;
  for (const auto& t : terms_)
    for (const auto& f : t.mono.factors()) out.push_back(f.first);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Polynomial::contains(AtomId a) const {
  for (const auto& t : terms_)
    if (t.mono.degree(a) > 0) return true;
  return false;
}

std::size_t Polynomial::hash() const {
  std::size_t h = 0;
  for (const auto& t : terms_) h = h * 31 + t.mono.hash() + std::hash<std::string>()(t.coef.get_str());
  return h;
}

// ---------------------------------------------------------------------------
// gcd

namespace {

using Univariate = std::vector<Polynomial>;

int deg(const Univariate& u) { return static_cast<int>(u.size()) - 1; }

void trim(Univariate& u) {
  while (!u.empty() && u.back().is_zero()) u.pop_back();
}

Polynomial exact(const Polynomial& a, const Polynomial& b) {
  auto q = a.divide_exact(b);
  if (!q) throw std::logic_error("inexact division in gcd");
  return *q;
}

Univariate prem(Univariate a, const Univariate& b) {
  int db = deg(b);
  const Polynomial& lb = b.back();
  int e = deg(a) - db + 1;
  while (!a.empty() && deg(a) >= db) {
    Polynomial la = a.back();
    int shift = deg(a) - db;
    for (auto& c : a) c = c * lb;
    for (int i = 0; i <= db; ++i) a[i + shift] = a[i + shift] - la * b[i];
    a.pop_back();
    trim(a);
    --e;
  }
  if (e > 0) {
    Polynomial f = lb.pow(static_cast<unsigned>(e));
    for (auto& c : a) c = c * f;
  }
  return a;
}

Polynomial gcd_no_content(const Polynomial& a, const Polynomial& b);

Polynomial content_of(const Univariate& u) {
  Polynomial g;
  for (const auto& c : u) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

Univariate primitive(const Univariate& u) {
  Polynomial c = content_of(u);
  if (c.is_one()) return u;
  Univariate r;
  r.reserve(u.size());
  for (const auto& x : u) r.push_back(exact(x, c));
  return r;
}

Univariate subresultant(Univariate a, Univariate b) {
  if (deg(a) < deg(b)) std::swap(a, b);
  Polynomial g(1), h(1);
  for (;;) {
    int d = deg(a) - deg(b);
    Univariate r = prem(a, b);
    if (r.empty()) return b;
    if (deg(r) == 0) return {Polynomial(1)};
    Polynomial div = g * h.pow(static_cast<unsigned>(d));
    a = std::move(b);
    b.clear();
    for (auto& c : r) b.push_back(exact(c, div));
    g = a.back();
    if (d == 0) {
    } else if (d == 1) {
      h = g;
    } else {
      h = exact(g.pow(static_cast<unsigned>(d)), h.pow(static_cast<unsigned>(d - 1)));
    }
  }
}

Polynomial gcd_no_content(const Polynomial& a, const Polynomial& b) {
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  Polynomial am = a.monic();
  Polynomial bm = b.monic();
  if (am == bm) return am;
  if (bm.size() <= am.size() && a.divide_exact(b)) return bm;
  if (am.size() <= bm.size() && b.divide_exact(a)) return am;
  std::vector<AtomId> va = a.atoms(), vb = b.atoms(), common;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
  if (common.empty()) return Polynomial(1);
  AtomId x = common.front();
  int best = 1 << 30;
  for (AtomId v : common) {
    int cost = std::max(a.degree_in(v), b.degree_in(v));
    if (cost < best) {
      best = cost;
      x = v;
    }
  }
  Univariate ua = a.coefficients_in(x), ub = b.coefficients_in(x);
  Polynomial ca = content_of(ua), cb = content_of(ub);
  Polynomial gc = gcd(ca, cb);
  Univariate pa, pb;
  for (const auto& c : ua) pa.push_back(exact(c, ca));
  for (const auto& c : ub) pb.push_back(exact(c, cb));
  trim(pa);
  trim(pb);
  Polynomial g(1);
  if (deg(pa) > 0 && deg(pb) > 0) {
    Univariate s = primitive(subresultant(pa, pb));
    g = Polynomial::from_coefficients(x, s);
  }
  return (gc * g).monic();
}

// coefficients of p with respect to every atom outside `keep`, each a polynomial in `keep`
std::vector<Polynomial> coefficients_outside(const Polynomial& p, const std::vector<AtomId>& keep) {
  std::map<std::vector<std::pair<AtomId, int>>, std::vector<Term>> groups;
  for (const Term& t : p.terms()) {
    std::vector<std::pair<AtomId, int>> key;
    Monomial inner;
    for (const auto& f : t.mono.factors()) {
      if (std::binary_search(keep.begin(), keep.end(), f.first))
        inner = inner * Monomial::of(f.first, f.second);
      else
        key.push_back(f);
    }
    groups[key].push_back({inner, t.coef});
  }
  std::vector<Polynomial> out;
  out.reserve(groups.size());
  for (auto& [key, terms] : groups) out.push_back(Polynomial::from_terms(std::move(terms)));
  std::sort(out.begin(), out.end(), [](const Polynomial& x, const Polynomial& y) { return x.size() < y.size(); });
  return out;
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  Monomial gm = ma.gcd(mb);
  Polynomial a1 = a.divide_monomial(ma);
  Polynomial b1 = b.divide_monomial(mb);
  // a common factor involves shared atoms only, so it divides every coefficient taken over the others
  std::vector<AtomId> va = a1.atoms(), vb = b1.atoms(), common;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
  if (common.size() < va.size() || common.size() < vb.size()) {
    std::vector<Polynomial> parts;
    for (const Polynomial* p : {&b1, &a1}) {
      if (p->atoms().size() == common.size()) {
        parts.push_back(*p);
      } else {
        auto cs = coefficients_outside(*p, common);
        parts.insert(parts.end(), cs.begin(), cs.end());
      }
    }
    Polynomial g = parts.front().monic();
    for (std::size_t i = 1; i < parts.size() && !g.is_constant(); ++i) g = gcd(g, parts[i]);
    return g.mul_term(gm, 1).monic();
  }
  Polynomial g = gcd_no_content(a1, b1);
  return g.mul_term(gm, 1).monic();
}

}  // namespace recipro
