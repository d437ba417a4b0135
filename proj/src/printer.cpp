#include <algorithm>
#include <array>

#include "recipro/expression.hpp"

namespace recipro {

namespace {

constexpr std::array<const char*, 35> kGreek = {
    "alpha", "beta",  "gamma", "delta", "epsilon", "zeta",    "eta",   "theta", "iota",  "kappa", "lambda", "mu",
    "nu",    "xi",    "pi",    "rho",   "sigma",   "tau",     "upsilon", "phi", "chi",   "psi",   "omega",  "Gamma",
    "Delta", "Theta", "Lambda", "Xi",   "Pi",      "Sigma",   "Upsilon", "Phi", "Psi",   "Omega", "varepsilon"};

std::vector<std::pair<AtomId, int>> print_factors(const Monomial& m) {
  auto f = m.factors();
  std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) { return print_less(a.first, b.first); });
  return f;
}

bool term_print_less(const Term& a, const Term& b) {
  int da = a.mono.total_degree(), db = b.mono.total_degree();
  if (da != db) return da > db;
  auto fa = print_factors(a.mono), fb = print_factors(b.mono);
  std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (fa[i].first != fb[i].first) return print_less(fa[i].first, fb[i].first);
    if (fa[i].second != fb[i].second) return fa[i].second > fb[i].second;
  }
  return fa.size() < fb.size();
}

std::vector<Term> print_terms(const Polynomial& p) {
  std::vector<Term> t = p.terms();
  std::sort(t.begin(), t.end(), term_print_less);
  return t;
}

std::string rational_text(const Rational& q) { return q.get_str(); }

std::string rational_latex(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

std::string poly_text(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : print_terms(p)) {
    Rational c = t.coef;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    first = false;
    auto f = print_factors(t.mono);
    std::string body;
    for (const auto& [a, e] : f) {
      if (!body.empty()) body += "*";
      body += atom_text(a);
      if (e > 1) body += "^" + std::to_string(e);
    }
    if (body.empty())
      s += rational_text(c);
    else if (c == 1)
      s += body;
    else
      s += rational_text(c) + "*" + body;
  }
  return s;
}

std::string poly_latex(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : print_terms(p)) {
    Rational c = t.coef;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    first = false;
    std::string body;
    for (const auto& [a, e] : print_factors(t.mono)) {
      if (!body.empty()) body += " ";
      std::string al = atom_latex(a);
      if (e > 1) {
        if (atom_info(a).kind == AtomKind::Generator && generator_info(a).kind == GeneratorKind::Power)
          al = "\\left(" + al + "\\right)";
        al += "^{" + std::to_string(e) + "}";
      }
      body += al;
    }
    if (body.empty())
      s += rational_latex(c);
    else if (c == 1)
      s += body;
    else
      s += rational_latex(c) + " " + body;
  }
  return s;
}

// scale so the first printed denominator term has coefficient one
std::pair<Polynomial, Polynomial> display_pair(const Expression& e) {
  if (e.den().is_one()) return {e.num(), e.den()};
  Rational lead = print_terms(e.den()).front().coef;
  if (lead == 1) return {e.num(), e.den()};
  Rational s = 1 / lead;
  return {e.num() * s, e.den() * s};
}

}  // namespace

std::string latex_name(const std::string& name) {
  std::size_t cut = name.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1]))) --cut;
  std::string head = name.substr(0, cut);
  for (const char* g : kGreek)
    if (head == g) return "\\" + name;
  return name;
}

std::string atom_text(AtomId a) {
  const AtomInfo& info = atom_info(a);
  switch (info.kind) {
    case AtomKind::Independent:
    case AtomKind::Parameter:
      return info.name;
    case AtomKind::Jet:
      return info.name + jet_suffix_text(info.index);
    case AtomKind::Generator: {
      const GeneratorInfo& g = generator_info(a);
      if (g.kind == GeneratorKind::ImaginaryUnit) return "I";
      if (g.kind == GeneratorKind::SquareRoot) return "sqrt(" + atom_text(g.base) + ")";
      return "pow(" + atom_text(g.base) + ", " + to_text(g.exponent) + ")";
    }
  }
  return info.name;
}

std::string atom_latex(AtomId a) {
  const AtomInfo& info = atom_info(a);
  switch (info.kind) {
    case AtomKind::Independent:
    case AtomKind::Parameter:
      return latex_name(info.name);
    case AtomKind::Jet:
      return latex_name(info.name) + jet_suffix_latex(info.index);
    case AtomKind::Generator: {
      const GeneratorInfo& g = generator_info(a);
      if (g.kind == GeneratorKind::ImaginaryUnit) return "I";
      if (g.kind == GeneratorKind::SquareRoot) return "\\sqrt{" + atom_latex(g.base) + "}";
      return atom_latex(g.base) + "^{" + to_latex(g.exponent) + "}";
    }
  }
  return info.name;
}

std::string to_text(const Expression& e) {
  auto [n, d] = display_pair(e);
  if (d.is_one()) return poly_text(n);
  return "(" + poly_text(n) + ")/(" + poly_text(d) + ")";
}

std::string to_latex(const Expression& e) {
  auto [n, d] = display_pair(e);
  if (d.is_one()) return poly_latex(n);
  return "\\frac{" + poly_latex(n) + "}{" + poly_latex(d) + "}";
}

}  // namespace recipro
