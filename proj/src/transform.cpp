#include "recipro/transform.hpp"

#include <algorithm>
#include <set>

#include "recipro/error.hpp"

namespace recipro {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  for (const auto& x : b)
    if (!contains(a, x)) a.push_back(x);
  return a;
}

// sorts equations by ascending leading jet and autoreduces
std::vector<Equation> interreduce(const std::vector<Equation>& eqs, const JetSpace& space, const Ranking& ranking, std::size_t budget,
                                  std::vector<std::string>* dropped) {
  SolvedSystem probe(space, ranking, budget);
  std::vector<std::pair<std::optional<AtomId>, Equation>> keyed;
  for (const auto& e : eqs) keyed.emplace_back(probe.leading_jet(e.expr), e);
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (!a.first || !b.first) return static_cast<bool>(b.first) && !a.first;
    return probe.ranking().above(*b.first, *a.first);
  });
  SolvedSystem s(space, ranking, budget);
  std::vector<Equation> out;
  for (auto& [lead, eq] : keyed) {
    Expression e = s.reduce(eq.expr);
    if (e.is_zero()) {
      if (dropped) dropped->push_back(eq.label);
      continue;
    }
    Equation r{eq.label, Expression::polynomial(e.num()), eq.definition};
    s.add_equation(r);
    out.push_back(r);
  }
  return out;
}

}  // namespace

ReciprocalTransform::ReciprocalTransform(TransformData d)
    : d_(std::make_shared<const TransformData>(std::move(d))), cache_(std::make_shared<Cache>()) {
  const TransformData& t = *d_;
  cache_->rules = rule_space();
  if (!t.source.has_independent(t.source_pivot)) throw InvalidArgument("pivot '" + t.source_pivot + "' is not a source variable");
  if (!t.target.has_independent(t.target_pivot)) throw InvalidArgument("pivot '" + t.target_pivot + "' is not a target variable");
  auto g = t.gradient.find(t.target_pivot);
  if (g == t.gradient.end() || g->second.is_zero()) throw ZeroPivot("pivot derivative of the new field vanishes");
  for (const auto& [s, z] : t.renames) {
    if (!t.source.has_independent(s)) throw InvalidArgument("renamed variable '" + s + "' is not a source variable");
    if (!t.target.has_independent(z)) throw InvalidArgument("renamed variable '" + z + "' is not a target variable");
  }
}

std::string ReciprocalTransform::target_var(const std::string& v) const {
  if (v == d_->source_pivot) return d_->target_pivot;
  for (const auto& [s, z] : d_->renames)
    if (s == v) return z;
  return "";
}

std::vector<std::string> ReciprocalTransform::target_aux_vars() const {
  std::vector<std::string> out;
  for (const auto& z : d_->target.independents()) {
    if (z == d_->target_pivot) continue;
    bool renamed = std::any_of(d_->renames.begin(), d_->renames.end(), [&](const auto& p) { return p.second == z; });
    if (!renamed) out.push_back(z);
  }
  return out;
}

Expression ReciprocalTransform::operator_apply(const std::string& v, const Expression& f) const {
  const TransformData& t = *d_;
  const JetSpace& space = t.target.owns(f) ? t.target : cache_->rules;
  const Expression& gp = t.gradient.at(t.target_pivot);
  VarId zp = intern_var(t.target_pivot);
  if (v == t.source_pivot) return space.total_derivative(f, zp, false) / gp;
  std::string z = target_var(v);
  if (z.empty()) throw UneliminableField("source variable '" + v + "' has no target counterpart");
  Expression dz = space.total_derivative(f, intern_var(z), false);
  auto g = t.gradient.find(z);
  if (g == t.gradient.end() || g->second.is_zero()) return dz;
  return dz - g->second / gp * space.total_derivative(f, zp, false);
}

JetSpace ReciprocalTransform::rule_space() const {
  std::vector<std::string> fields;
  for (const auto& f : d_->source.dependents())
    if (!d_->target.has_independent(f) && !d_->target.has_parameter(f)) fields.push_back(f);
  return d_->target.extended(fields, d_->source.parameters());
}

Expression ReciprocalTransform::base_value(const std::string& field, bool generic) const {
  const TransformData& t = *d_;
  if (!generic) {
    auto r = t.relations.find(field);
    if (r != t.relations.end()) return r->second;
    if (contains(t.retained, field) || t.target.has_field(field)) return Expression::atom(jet_atom(field));
    throw UneliminableField("field '" + field + "' has no inverse relation");
  }
  return Expression::atom(jet_atom(field));
}

Expression ReciprocalTransform::rule_impl(AtomId jet, bool generic) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto& m = generic ? cache_->generic : cache_->eliminated;
    auto it = m.find(jet);
    if (it != m.end()) return it->second;
  }
  const TransformData& t = *d_;
  const AtomInfo& info = atom_info(jet);
  Expression value;
  if (info.index.empty()) {
    value = base_value(info.name, generic);
  } else {
    std::string step;
    for (const auto& v : t.source.independents())
      if (info.index.count(intern_var(v)) > 0 && t.source_aux.count(v) == 0) {
        step = v;
        break;
      }
    if (!step.empty()) {
      AtomId lower = jet_atom(info.name, info.index.minus(intern_var(step)));
      value = operator_apply(step, rule_impl(lower, generic));
    } else {
      // only source-aux derivatives remain
      const auto& entries = info.index.entries();
      if (entries.size() != 1 || entries[0].second != 1 || info.name != t.source_aux_field)
        throw UneliminableField("jet " + atom_text(jet) + " cannot be expressed in target variables");
      value = t.source_aux.at(var_name(entries[0].first));
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto& m = generic ? cache_->generic : cache_->eliminated;
  m.emplace(jet, value);
  return value;
}

Expression ReciprocalTransform::eliminated_rule(AtomId source_jet) const { return rule_impl(source_jet, false); }

std::vector<std::pair<AtomId, Expression>> ReciprocalTransform::derivative_rules(int order) const {
  if (order < 1) throw InvalidArgument("rule order must be at least 1");
  if (order > d_->target.max_order()) throw OrderOverflow("rule order exceeds the target space's max order");
  std::vector<std::pair<AtomId, Expression>> out;
  JetSpace rs = rule_space();
  for (const auto& f : d_->source.dependents()) {
    if (!rs.has_field(f)) continue;
    for (AtomId j : d_->source.jets(f, order)) {
      if (atom_info(j).index.empty()) continue;
      bool aux = false;
      for (const auto& [v, k] : atom_info(j).index.entries())
        if (d_->source_aux.count(var_name(v))) aux = true;
      if (aux) continue;
      out.emplace_back(j, rule_impl(j, true));
    }
  }
  return out;
}

Expression ReciprocalTransform::map_expression(const Expression& e) const {
  const TransformData& t = *d_;
  SubstitutionMap m;
  for (AtomId a : e.atoms()) {
    const AtomInfo& info = atom_info(a);
    switch (info.kind) {
      case AtomKind::Independent:
        if (info.name == t.source_pivot) {
          if (t.new_field.empty()) throw UneliminableField("explicit dependence on the pivot variable");
          m.emplace(a, Expression::atom(jet_atom(t.new_field)));
        } else {
          std::string z = target_var(info.name);
          if (z.empty()) throw UneliminableField("explicit dependence on '" + info.name + "'");
          m.emplace(a, Expression::atom(independent_atom(z)));
        }
        break;
      case AtomKind::Parameter:
        break;
      case AtomKind::Jet:
        m.emplace(a, eliminated_rule(a));
        break;
      case AtomKind::Generator: {
        const GeneratorInfo& g = generator_info(a);
        if (g.kind == GeneratorKind::ImaginaryUnit) break;
        Expression base = map_expression(Expression::atom(g.base));
        if (base == Expression::atom(g.base)) break;
        if (!base.is_atom()) throw UneliminableField("generator base " + atom_text(g.base) + " does not map to an atom");
        m.emplace(a, g.kind == GeneratorKind::SquareRoot ? sqrt_of(base.as_atom()) : power_of(base.as_atom(), g.exponent));
        break;
      }
    }
  }
  return substitute(e, m);
}

std::vector<Equation> ReciprocalTransform::closure_conditions() const {
  const TransformData& t = *d_;
  std::vector<Equation> out;
  std::vector<std::pair<std::string, Expression>> g(t.gradient.begin(), t.gradient.end());
  std::vector<std::string> order = t.target.independents();
  std::sort(g.begin(), g.end(), [&](const auto& a, const auto& b) {
    return std::find(order.begin(), order.end(), a.first) < std::find(order.begin(), order.end(), b.first);
  });
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      Expression r = t.target.total_derivative(g[b].second, intern_var(g[a].first), false) -
                     t.target.total_derivative(g[a].second, intern_var(g[b].first), false);
      if (!r.is_zero()) out.push_back({"closure(" + g[a].first + "," + g[b].first + ")", r, false});
    }
  return out;
}

PDESystem ReciprocalTransform::apply(const PDESystem& sys, const ApplyOptions& opts) const {
  const TransformData& t = *d_;
  for (const auto& eq : sys.equations())
    if (!t.source.owns(eq.expr)) throw InvalidArgument("equation '" + eq.label + "' is not in the transform's source space");
  JetSpace target = t.target.extended({}, sys.space().parameters());
  std::vector<std::string> notes;
  std::vector<Equation> mapped;
  for (const auto& eq : sys.equations()) mapped.push_back({eq.label, map_expression(eq.expr), eq.definition});

  std::vector<Equation> closure = opts.adjoin_closure ? closure_conditions() : std::vector<Equation>{};
  std::vector<Equation> relations = opts.extra_relations;
  relations.insert(relations.end(), closure.begin(), closure.end());
  Ranking base = Ranking::default_for(target);
  if (!relations.empty()) {
    std::vector<std::string> dropped;
    auto solved = interreduce(relations, target, base, opts.budget, &dropped);
    SolvedSystem rs(target, base, opts.budget);
    for (const auto& r : solved) rs.add_equation(r);
    for (auto& eq : mapped) eq.expr = rs.reduce(eq.expr);
    closure.clear();
    for (const auto& r : solved)
      if (r.label.rfind("closure(", 0) == 0) closure.push_back(r);
  }
  for (const auto& [f, rel] : t.relations) notes.push_back("eliminated " + f + " = " + to_text(rel));
  std::vector<Equation> kept;
  for (auto& eq : mapped) {
    if (eq.expr.is_zero()) {
      notes.push_back("equation '" + eq.label + "' becomes an identity");
      continue;
    }
    eq.expr = Expression::polynomial(eq.expr.num());
    kept.push_back(eq);
  }
  if (opts.interreduce_retained && !t.retained.empty()) {
    Ranking r = base;
    r.blocks.push_back(t.retained);
    std::vector<std::string> dropped;
    kept = interreduce(kept, target, r, opts.budget, &dropped);
    for (const auto& d : dropped) notes.push_back("equation '" + d + "' is dependent after eliminating retained fields");
  }
  for (const auto& c : closure) {
    kept.push_back(c);
    notes.push_back("adjoined closure condition " + c.label);
  }
  PDESystem out(opts.name.empty() ? sys.name() + "'" : opts.name, target, kept);
  out.provenance() = notes;
  return out;
}

ReciprocalTransform ReciprocalTransform::inverse() const {
  const TransformData& t = *d_;
  TransformData inv;
  inv.source = t.target;
  inv.target = t.source;
  inv.source_pivot = t.target_pivot;
  inv.target_pivot = t.source_pivot;
  for (const auto& [s, z] : t.renames) inv.renames.emplace_back(z, s);
  inv.new_field = t.source_aux_field;
  inv.gradient = t.one_form;
  inv.one_form = t.gradient;
  inv.relations = t.inverse_relations;
  inv.inverse_relations = t.relations;
  inv.aux = t.source_aux;
  inv.source_aux_field = t.new_field;
  inv.source_aux = t.aux;
  inv.retained = t.retained;
  inv.notes = t.notes;
  if (inv.gradient.count(inv.target_pivot) == 0 || inv.gradient.at(inv.target_pivot).is_zero())
    throw ZeroPivot("inverse transform has a vanishing pivot coefficient");
  return ReciprocalTransform(std::move(inv));
}

ReciprocalTransform ReciprocalTransform::with_relations(const std::vector<std::string>& target_fields,
                                                        const std::map<std::string, Expression>& relations,
                                                        const std::vector<std::string>& retained) const {
  TransformData d = *d_;
  d.target = d.target.extended(target_fields);
  std::vector<std::string> src;
  for (const auto& [f, r] : relations) src.push_back(f);
  src = concat(src, retained);
  d.source = d.source.extended(src);
  for (const auto& [f, r] : relations) d.relations[f] = r;
  d.retained = concat(d.retained, retained);
  return ReciprocalTransform(std::move(d));
}

// ---------------------------------------------------------------------------
// builders

ReciprocalTransform build_transform(const ConservedPair& pair, const std::map<std::string, Expression>& extra_coeffs,
                                    const std::string& pivot, const PDESystem& source_system, const BuildOptions& opts) {
  return build_transform(pair, extra_coeffs, pivot, source_system.space(), opts);
}

ReciprocalTransform build_transform(const ConservedPair& pair, const std::map<std::string, Expression>& extra_coeffs,
                                    const std::string& pivot, const JetSpace& source, const BuildOptions& opts) {
  std::map<std::string, Expression> coeff;
  coeff[pair.x_prime()] = pair.a();
  coeff[pair.x()] = pair.a_prime();
  for (const auto& [v, c] : extra_coeffs) {
    if (coeff.count(v)) throw InvalidArgument("duplicate one-form coefficient for '" + v + "'");
    coeff[v] = c;
  }
  for (const auto& [v, c] : coeff)
    if (!source.has_independent(v)) throw UnknownName("one-form variable '" + v + "' is not a source variable");
  if (!coeff.count(pivot)) throw InvalidArgument("pivot '" + pivot + "' has no one-form coefficient");
  const Expression& cp = coeff.at(pivot);
  if (cp.is_zero()) throw ZeroPivot("pivot coefficient normalizes to zero");

  std::vector<std::pair<std::string, std::string>> renames = opts.renames;
  for (const auto& v : source.independents()) {
    if (v == pivot) continue;
    bool has = std::any_of(renames.begin(), renames.end(), [&](const auto& p) { return p.first == v; });
    if (!has) renames.emplace_back(v, v);
  }
  std::vector<std::string> tvars = opts.target_vars;
  if (tvars.empty()) {
    tvars.push_back(opts.target_pivot);
    for (const auto& [s, z] : renames) tvars.push_back(z);
    for (const auto& [z, e] : opts.aux) tvars.push_back(z);
  }
  std::vector<std::string> tfields{opts.new_field};
  for (const auto& r : opts.retained) tfields.push_back(r);
  JetSpace target = JetSpace::declare(tvars, tfields, opts.target_order, source.parameters());

  // new-field derivatives as source expressions
  std::map<std::string, Expression> grad_src;
  grad_src[opts.target_pivot] = Expression(1) / cp;
  for (const auto& [s, z] : renames) {
    auto it = coeff.find(s);
    if (it != coeff.end() && !it->second.is_zero()) grad_src[z] = -it->second / cp;
  }
  for (const auto& [z, e] : opts.aux) grad_src[z] = e;

  // solve X_{z_j} = grad_src[z_j] for the source fields with the old fields ranked highest
  std::vector<std::string> old_fields;
  for (const auto& f : source.dependents())
    if (!contains(opts.retained, f)) old_fields.push_back(f);
  JetSpace combined = target.extended(old_fields);
  Ranking elim = Ranking::default_for(combined);
  elim.blocks.push_back(old_fields);
  SolvedSystem rel(combined, elim);
  std::vector<Equation> rel_eqs;
  for (const auto& [z, g] : grad_src) {
    Expression xz = target.jet(opts.new_field, {{z, 1}});
    rel_eqs.push_back({"d" + opts.new_field + "/d" + z, xz - g});
  }
  for (const auto& eq : interreduce(rel_eqs, combined, elim, kDefaultBudget, nullptr)) rel.add_equation(eq);

  TransformData d;
  d.source = source;
  d.target = target;
  d.source_pivot = pivot;
  d.target_pivot = opts.target_pivot;
  d.renames = renames;
  d.new_field = opts.new_field;
  for (const auto& z : tvars) d.gradient[z] = target.jet(opts.new_field, {{z, 1}});
  d.one_form = coeff;
  for (const auto& f : old_fields) {
    Expression v = rel.reduce(Expression::atom(jet_atom(f)));
    bool clean = true;
    for (AtomId a : v.atoms())
      if (atom_info(a).kind == AtomKind::Jet && contains(old_fields, atom_info(a).name)) clean = false;
    if (clean) d.relations[f] = v;
  }
  d.inverse_relations[opts.new_field] = Expression::atom(independent_atom(pivot));
  d.aux.insert(opts.aux.begin(), opts.aux.end());
  d.retained = opts.retained;
  d.notes.push_back("pivot coefficient " + to_text(cp) + " is assumed nonvanishing");
  return ReciprocalTransform(std::move(d));
}

ReciprocalTransform build_from_gradient(const GradientSpec& spec) {
  TransformData d;
  d.source = spec.source;
  d.target = spec.target;
  d.source_pivot = spec.source_pivot;
  d.target_pivot = spec.target_pivot;
  d.renames = spec.renames;
  d.new_field = spec.new_field;
  d.gradient = spec.gradient;
  d.retained = spec.retained;
  const Expression& gp = spec.gradient.at(spec.target_pivot);
  if (gp.is_zero()) throw ZeroPivot("pivot derivative vanishes");
  d.notes.push_back("pivot derivative " + to_text(gp) + " is assumed nonvanishing");
  return ReciprocalTransform(std::move(d));
}

// ---------------------------------------------------------------------------

PDESystem potentialize(const PDESystem& sys, const std::vector<ConservedPair>& laws, const std::string& new_field, Report* closure_report) {
  if (laws.empty()) throw InvalidArgument("potentialize needs at least one conservation law");
  SolvedSystem s = solve_leading(sys);
  Report closure;
  closure.name = "closure of " + new_field;
  std::map<std::string, Expression> grad;
  auto set_grad = [&](const std::string& v, const Expression& e) {
    auto [it, inserted] = grad.emplace(v, e);
    if (!inserted && it->second != e) throw InvalidArgument("conflicting potential derivatives along '" + v + "'");
  };
  for (const auto& law : laws) {
    Report r = verify_conserved(law, s);
    if (!r.holds) throw NotConservative("law D_" + law.x() + "(" + to_text(law.a()) + ") = D_" + law.x_prime() + "(...) is not conservative");
    closure.merge(r);
    set_grad(law.x_prime(), law.a());
    set_grad(law.x(), law.a_prime());
  }
  JetSpace space = sys.space().extended({new_field});
  std::vector<Equation> eqs;
  for (const auto& [v, e] : grad) eqs.push_back({new_field + "_" + v, space.jet(new_field, {{v, 1}}) - e, true});
  for (const auto& eq : sys.equations()) eqs.push_back(eq);
  Ranking r = sys.effective_ranking();
  r.blocks.insert(r.blocks.begin(), {new_field});
  PDESystem out(sys.name() + "+" + new_field, space, eqs, r);
  out.provenance().push_back("potential " + new_field + " defined by " + std::to_string(grad.size()) + " derivative relations");
  if (closure_report) *closure_report = closure;
  return out;
}

}  // namespace recipro
