#include "recipro/jet_space.hpp"

#include <algorithm>
#include <set>

#include "recipro/error.hpp"

namespace recipro {

namespace {

std::string where(const Token& at) { return std::to_string(at.line) + ":" + std::to_string(at.col) + ": "; }

}  // namespace

Expression SpaceScope::identifier(const std::string& name, const Token& at) const {
  if (name == "I") return imaginary_unit();
  if (space_.has_independent(name)) return space_.var(name);
  if (space_.has_field(name)) return space_.field(name);
  if (space_.has_parameter(name)) return space_.param(name);
  throw UnknownName(where(at) + "unknown name '" + name + "'");
}

Expression SpaceScope::jet(const std::string& field, const std::map<std::string, int>& counts, const Token& at) const {
  if (!space_.has_field(field)) throw UnknownName(where(at) + "unknown field '" + field + "'");
  return space_.jet(field, counts);
}

bool SpaceScope::is_variable(const std::string& name) const { return space_.has_independent(name); }

Expression SpaceScope::total_derivative(const Expression& e, const std::string& var, const Token& at) const {
  if (!space_.has_independent(var)) throw UnknownName(where(at) + "unknown variable '" + var + "'");
  return space_.total_derivative(e, intern_var(var), false);
}

namespace {

void check_name(const std::string& n) {
  if (n.empty() || !std::isalpha(static_cast<unsigned char>(n[0])))
    throw InvalidArgument("invalid name '" + n + "'");
  for (char c : n)
    if (!std::isalnum(static_cast<unsigned char>(c))) throw InvalidArgument("invalid name '" + n + "'");
  if (n == "I") throw InvalidArgument("'I' is reserved for the imaginary unit");
}

}  // namespace

JetSpace JetSpace::declare(const std::vector<std::string>& independents, const std::vector<std::string>& dependents, int max_order,
                           const std::vector<std::string>& parameters) {
  if (independents.empty()) throw InvalidArgument("a jet space needs at least one independent variable");
  if (dependents.empty()) throw InvalidArgument("a jet space needs at least one dependent field");
  if (max_order < 1) throw InvalidArgument("max order must be at least 1");
  std::set<std::string> seen;
  for (const auto* list : {&independents, &dependents, &parameters})
    for (const auto& n : *list) {
      check_name(n);
      if (!seen.insert(n).second) throw DuplicateName("duplicate name '" + n + "'");
    }
  auto d = std::make_shared<Data>();
  d->independents = independents;
  d->dependents = dependents;
  d->parameters = parameters;
  d->max_order = max_order;
  for (const auto& n : independents) {
    d->var_ids.push_back(intern_var(n));
    d->var_atoms.push_back(independent_atom(n));
  }
  JetSpace s;
  s.d_ = d;
  return s;
}

bool JetSpace::has_independent(const std::string& n) const {
  return std::find(d_->independents.begin(), d_->independents.end(), n) != d_->independents.end();
}
bool JetSpace::has_field(const std::string& n) const {
  return std::find(d_->dependents.begin(), d_->dependents.end(), n) != d_->dependents.end();
}
bool JetSpace::has_parameter(const std::string& n) const {
  return std::find(d_->parameters.begin(), d_->parameters.end(), n) != d_->parameters.end();
}

int JetSpace::var_position(VarId v) const {
  for (std::size_t i = 0; i < d_->var_ids.size(); ++i)
    if (d_->var_ids[i] == v) return static_cast<int>(i);
  return -1;
}

Expression JetSpace::var(const std::string& name) const {
  if (!has_independent(name)) throw UnknownName("unknown independent variable '" + name + "'");
  return Expression::atom(independent_atom(name));
}

Expression JetSpace::field(const std::string& name) const {
  if (!has_field(name)) throw UnknownName("unknown field '" + name + "'");
  return Expression::atom(jet_atom(name));
}

Expression JetSpace::param(const std::string& name) const {
  if (!has_parameter(name)) throw UnknownName("unknown parameter '" + name + "'");
  return Expression::atom(parameter_atom(name));
}

AtomId JetSpace::jet_id(const std::string& f, const std::map<std::string, int>& counts) const {
  if (!has_field(f)) throw UnknownName("unknown field '" + f + "'");
  MultiIndex m;
  for (const auto& [v, k] : counts) {
    if (!has_independent(v)) throw UnknownName("unknown independent variable '" + v + "'");
    if (k < 0) throw InvalidArgument("negative derivative count");
    m = m.plus(intern_var(v), k);
  }
  return jet_atom(f, m);
}

Expression JetSpace::jet(const std::string& f, const std::map<std::string, int>& counts) const {
  return Expression::atom(jet_id(f, counts));
}

std::size_t JetSpace::jet_count_per_field() const {
  // C(n + p, p)
  std::size_t n = d_->independents.size(), p = static_cast<std::size_t>(d_->max_order);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= p; ++i) r = r * (n + i) / i;
  return r;
}

std::vector<AtomId> JetSpace::jets(const std::string& f, int max_order) const {
  std::vector<AtomId> out;
  std::vector<MultiIndex> layer{MultiIndex()};
  std::set<MultiIndex> all{MultiIndex()};
  for (int o = 1; o <= max_order; ++o) {
    std::vector<MultiIndex> nextl;
    for (const auto& m : layer)
      for (VarId v : d_->var_ids) {
        MultiIndex n = m.plus(v);
        if (all.insert(n).second) nextl.push_back(n);
      }
    layer = std::move(nextl);
  }
  for (const auto& m : all) out.push_back(jet_atom(f, m));
  std::sort(out.begin(), out.end(), [](AtomId a, AtomId b) {
    if (atom_info(a).order != atom_info(b).order) return atom_info(a).order < atom_info(b).order;
    return print_less(a, b);
  });
  return out;
}

bool JetSpace::owns_atom(AtomId a) const {
  const AtomInfo& info = atom_info(a);
  switch (info.kind) {
    case AtomKind::Independent:
      return has_independent(info.name);
    case AtomKind::Parameter:
      return has_parameter(info.name);
    case AtomKind::Jet:
      if (!has_field(info.name)) return false;
      for (const auto& [v, k] : info.index.entries())
        if (var_position(v) < 0) return false;
      return true;
    case AtomKind::Generator: {
      const GeneratorInfo& g = generator_info(a);
      if (g.kind == GeneratorKind::ImaginaryUnit) return true;
      if (!owns_atom(g.base)) return false;
      return g.kind != GeneratorKind::Power || owns(g.exponent);
    }
  }
  return false;
}

bool JetSpace::owns(const Expression& e) const {
  for (AtomId a : e.atoms())
    if (!owns_atom(a)) return false;
  return true;
}

namespace {

// derivative of a single atom; jets of fields outside the space have zero derivative only if
// they are parameters, so anything foreign is rejected
Expression atom_derivative(const JetSpace& s, AtomId a, VarId v, bool check_order) {
  const AtomInfo& info = atom_info(a);
  switch (info.kind) {
    case AtomKind::Independent:
      return info.name == var_name(v) ? Expression(1) : Expression();
    case AtomKind::Parameter:
      return Expression();
    case AtomKind::Jet:
      if (!s.has_field(info.name)) throw InvalidArgument("field '" + info.name + "' is not in the jet space");
      if (check_order && info.order >= s.max_order())
        throw OrderOverflow("differentiating " + atom_text(a) + " exceeds max order " + std::to_string(s.max_order()));
      return Expression::atom(jet_derivative(a, v));
    case AtomKind::Generator: {
      const GeneratorInfo& g = generator_info(a);
      if (g.kind == GeneratorKind::ImaginaryUnit) return Expression();
      return generator_derivative(a, atom_derivative(s, g.base, v, check_order));
    }
  }
  return Expression();
}

Expression poly_derivative(const JetSpace& s, const Polynomial& p, VarId v, bool check_order, std::map<AtomId, Expression>& memo) {
  std::vector<AtomId> atoms = p.atoms();
  std::vector<Term> plain;
  Expression extra;
  for (AtomId a : atoms) {
    auto it = memo.find(a);
    if (it == memo.end()) it = memo.emplace(a, atom_derivative(s, a, v, check_order)).first;
    const Expression& da = it->second;
    if (da.is_zero()) continue;
    Polynomial part = p.partial(a);
    if (da.is_polynomial() && da.num().is_monomial()) {
      const Term& t = da.num().leading_term();
      for (const auto& pt : part.terms()) plain.push_back({pt.mono * t.mono, pt.coef * t.coef});
    } else {
      extra = extra + Expression::polynomial(part) * da;
    }
  }
  Expression r = Expression::polynomial(Polynomial::from_terms(std::move(plain)));
  return extra.is_zero() ? r : r + extra;
}

}  // namespace

Expression JetSpace::total_derivative(const Expression& e, VarId v, bool check_order) const {
  if (var_position(v) < 0) throw UnknownName("'" + var_name(v) + "' is not an independent variable of the space");
  std::map<AtomId, Expression> memo;
  Expression dn = poly_derivative(*this, e.num(), v, check_order, memo);
  if (e.den().is_constant()) return dn;
  Expression dd = poly_derivative(*this, e.den(), v, check_order, memo);
  if (dd.is_zero()) return dn / Expression::polynomial(e.den());
  if (dn.is_polynomial() && dd.is_polynomial()) {
    // g = gcd(d, d'); n'(d/g) - n(d'/g) is coprime to d(d/g) when gcd(n, d) = 1
    const Polynomial& d = e.den();
    Polynomial g = gcd(d, dd.num());
    Polynomial dg = g.is_constant() ? d : *d.divide_exact(g);
    Polynomial ddg = g.is_constant() ? dd.num() : *dd.num().divide_exact(g);
    return Expression::coprime_fraction(dn.num() * dg - e.num() * ddg, d * dg);
  }
  Expression den = Expression::polynomial(e.den());
  return (dn * den - Expression::polynomial(e.num()) * dd) / (den * den);
}

Expression JetSpace::total_derivative(const Expression& e, const std::string& var) const {
  if (!has_independent(var)) throw UnknownName("'" + var + "' is not an independent variable of the space");
  return total_derivative(e, intern_var(var), true);
}

Expression JetSpace::total_derivative(const Expression& e, const MultiIndex& m, bool check_order) const {
  Expression r = e;
  for (VarId v : d_->var_ids)
    for (int k = 0; k < m.count(v); ++k) r = total_derivative(r, v, check_order);
  return r;
}

JetSpace JetSpace::extended(const std::vector<std::string>& fields, const std::vector<std::string>& parameters, int max_order) const {
  std::vector<std::string> f = d_->dependents, p = d_->parameters;
  for (const auto& x : fields)
    if (!has_field(x)) f.push_back(x);
  for (const auto& x : parameters)
    if (!has_parameter(x)) p.push_back(x);
  return declare(d_->independents, f, max_order > 0 ? max_order : d_->max_order, p);
}

Expression substitute_field(const JetSpace& space, const Expression& e, const std::string& field, const Expression& value) {
  SubstitutionMap m;
  for (AtomId a : e.atoms()) {
    const AtomInfo& info = atom_info(a);
    if (info.kind == AtomKind::Jet && info.name == field) m.emplace(a, space.total_derivative(value, info.index, false));
  }
  return substitute(e, m);
}

JetSpace JetSpace::with_max_order(int p) const { return declare(d_->independents, d_->dependents, p, d_->parameters); }

bool JetSpace::operator==(const JetSpace& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  return d_->independents == o.d_->independents && d_->dependents == o.d_->dependents && d_->parameters == o.d_->parameters &&
         d_->max_order == o.d_->max_order;
}

Expression JetSpace::parse(const std::string& text) const {
  SpaceScope scope(*this);
  return parse_expression(text, scope);
}

}  // namespace recipro
