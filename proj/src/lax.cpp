#include "recipro/lax.hpp"

#include <algorithm>
#include <set>

#include "recipro/error.hpp"

namespace recipro {

namespace {

bool is_eigen(AtomId a, const std::vector<std::string>& eigen) {
  const AtomInfo& info = atom_info(a);
  return info.kind == AtomKind::Jet && std::find(eigen.begin(), eigen.end(), info.name) != eigen.end();
}

Ranking eigen_ranking(const LaxPair& lp) {
  Ranking r;
  r.priority = lp.eigen_priority;
  if (r.priority.empty()) r.priority.assign(lp.space.independents().rbegin(), lp.space.independents().rend());
  r.orderly = false;
  r.blocks.push_back(lp.eigen);
  if (!lp.spectral.empty()) r.blocks.push_back({lp.spectral});
  return r.completed(lp.space);
}

JetSpace combined_space(const JetSpace& base, const JetSpace& extra, const std::vector<std::string>& skip) {
  std::vector<std::string> fields;
  for (const auto& f : extra.dependents())
    if (std::find(skip.begin(), skip.end(), f) == skip.end()) fields.push_back(f);
  return base.extended(fields, extra.parameters());
}

std::array<Expression, 4> matmul(const std::array<Expression, 4>& a, const std::array<Expression, 4>& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

}  // namespace

std::vector<Equation> LaxPair::equations() const {
  std::vector<Equation> out = spatial;
  out.insert(out.end(), temporal.begin(), temporal.end());
  return out;
}

LaxPair matrix_pair(std::string name, JetSpace space, std::array<std::string, 2> eigen, MatrixForm form, std::string spectral,
                    std::vector<Equation> constraints) {
  LaxPair lp;
  lp.name = std::move(name);
  lp.kind = LaxKind::Matrix2;
  lp.space = space;
  lp.eigen = {eigen[0], eigen[1]};
  lp.spectral = std::move(spectral);
  lp.constraints = std::move(constraints);
  Expression f[2] = {space.field(eigen[0]), space.field(eigen[1])};
  for (int i = 0; i < 2; ++i) {
    Expression sp = space.jet(eigen[i], {{form.x, 1}}) - form.U[2 * i] * f[0] - form.U[2 * i + 1] * f[1];
    lp.spatial.push_back({eigen[i] + "_" + form.x, sp});
    Expression tm = space.jet(eigen[i], {{form.t, 1}}) - form.V[2 * i] * f[0] - form.V[2 * i + 1] * f[1];
    for (const auto& [v, s] : form.transport) tm -= s * space.jet(eigen[i], {{v, 1}});
    lp.temporal.push_back({eigen[i] + "_" + form.t, tm});
  }
  lp.matrix = std::move(form);
  return lp;
}

GaugeFactor::GaugeFactor(Expression e) : g(std::move(e)) {
  if (g.is_zero()) throw InvalidArgument("gauge factor must not vanish");
}

std::map<AtomId, Expression> eigen_coefficients(const Expression& e, const std::vector<std::string>& eigen) {
  std::map<AtomId, std::vector<Term>> acc;
  for (AtomId a : e.den().atoms())
    if (is_eigen(a, eigen)) throw NotLinearInEigenfunction("eigenfunction jet " + atom_text(a) + " in a denominator");
  for (const Term& t : e.num().terms()) {
    std::optional<AtomId> found;
    for (const auto& [a, k] : t.mono.factors()) {
      if (!is_eigen(a, eigen)) continue;
      if (found || k != 1) throw NotLinearInEigenfunction("expression is not linear in the eigenfunction: " + to_text(e));
      found = a;
    }
    if (!found) throw NotLinearInEigenfunction("term free of the eigenfunction in " + to_text(e));
    acc[*found].push_back({t.mono.without(*found), t.coef});
  }
  std::map<AtomId, Expression> out;
  for (auto& [a, terms] : acc) out.emplace(a, Expression::fraction(Polynomial::from_terms(std::move(terms)), e.den()));
  return out;
}

bool is_linear_homogeneous(const Expression& e, const std::vector<std::string>& eigen) {
  try {
    eigen_coefficients(e, eigen);
    return true;
  } catch (const NotLinearInEigenfunction&) {
    return false;
  }
}

SolvedSystem eigen_system(const LaxPair& lp, std::size_t budget) {
  SolvedSystem s(lp.space, eigen_ranking(lp), budget);
  for (const auto& c : lp.constraints) s.add_equation(c);
  for (const auto& eq : lp.equations()) {
    eigen_coefficients(eq.expr, lp.eigen);
    s.add_equation(eq);
  }
  return s;
}

std::vector<Expression> compatibility_residual(const LaxPair& lp, std::size_t budget) {
  SolvedSystem s = eigen_system(lp, budget);
  std::vector<Expression> out;
  for (const auto& cp : critical_pairs(s, lp.eigen)) {
    if (cp.difference.is_zero()) continue;
    for (auto& [a, c] : eigen_coefficients(cp.difference, lp.eigen))
      if (!c.is_zero()) out.push_back(c);
  }
  return out;
}

std::vector<Expression> zero_curvature(const LaxPair& lp, std::size_t budget) {
  if (!lp.matrix) throw InvalidArgument("pair '" + lp.name + "' has no matrix form");
  const MatrixForm& m = *lp.matrix;
  const JetSpace& sp = lp.space;
  SolvedSystem cons(sp, eigen_ranking(lp), budget);
  for (const auto& c : lp.constraints) cons.add_equation(c);
  Expression sx;
  for (const auto& [v, s] : m.transport)
    if (v == m.x) sx += s;
  std::array<Expression, 4> W;
  for (int i = 0; i < 4; ++i) W[i] = sx * m.U[i] + m.V[i];
  auto UW = matmul(m.U, W), WU = matmul(W, m.U);
  std::vector<Expression> out;
  for (int i = 0; i < 4; ++i) {
    Expression z = sp.total_derivative(m.U[i], intern_var(m.t), false) - sp.total_derivative(W[i], intern_var(m.x), false) + UW[i] - WU[i];
    for (const auto& [v, s] : m.transport)
      if (v != m.x) z -= s * sp.total_derivative(m.U[i], intern_var(v), false);
    out.push_back(cons.reduce(z));
  }
  for (const auto& [v, s] : m.transport)
    if (v != m.x) out.push_back(cons.reduce(sp.total_derivative(s, intern_var(m.x), false)));
  return out;
}

SolvedSystem system_with_constraints(const LaxPair& lp, const PDESystem& sys, std::size_t budget) {
  JetSpace space = combined_space(sys.space(), lp.space, lp.eigen);
  Ranking r = sys.effective_ranking();
  if (!lp.spectral.empty()) r.blocks.insert(r.blocks.begin(), {lp.spectral});
  SolvedSystem s(space, r, budget);
  for (const auto& c : lp.constraints) s.add_equation(c);
  for (const auto& eq : sys.equations()) s.add_equation(eq);
  return s;
}

Report verify_yields(const LaxPair& lp, const PDESystem& sys, CompatibilityRoute route, std::size_t budget) {
  Report rep;
  rep.name = lp.name + " yields " + sys.name();
  std::vector<Expression> coeffs = route == CompatibilityRoute::ZeroCurvature ? zero_curvature(lp, budget) : compatibility_residual(lp, budget);
  SolvedSystem s = system_with_constraints(lp, sys, budget);
  ReduceStats st;
  for (std::size_t i = 0; i < coeffs.size(); ++i) rep.add("coefficient " + std::to_string(i + 1), s.reduce(coeffs[i], &st));
  rep.rewrite_count = st.rewrites;
  if (coeffs.empty()) rep.notes.push_back("cross-derivatives agree identically");
  rep.notes.push_back(route == CompatibilityRoute::ZeroCurvature ? "route: zero curvature" : "route: cross derivatives");
  return rep;
}

LaxPair transform_lax(const ReciprocalTransform& t, const LaxPair& lp, const GaugeFactor& g, const std::vector<std::string>& new_eigen,
                      const SolvedSystem* target_rules) {
  if (new_eigen.size() != lp.eigen.size()) throw InvalidArgument("eigenfunction count mismatch");
  std::vector<std::string> tfields = new_eigen;
  std::vector<std::string> retained;
  if (!lp.spectral.empty()) {
    tfields.push_back(lp.spectral);
    retained.push_back(lp.spectral);
  }
  std::map<std::string, Expression> rel;
  JetSpace tspace = t.target().extended(tfields, lp.space.parameters());
  for (std::size_t i = 0; i < lp.eigen.size(); ++i) rel[lp.eigen[i]] = g.g * tspace.field(new_eigen[i]);
  ReciprocalTransform tt = t.with_relations(tfields, rel, retained);

  LaxPair out;
  out.name = lp.name + "'";
  out.kind = LaxKind::Scalar;
  out.space = tspace;
  out.eigen = new_eigen;
  out.spectral = lp.spectral;
  auto convert = [&](const Equation& eq, bool eigen_eq) {
    Expression e = tt.map_expression(eq.expr);
    if (target_rules) e = target_rules->reduce(e);
    e = Expression::polynomial(e.num());
    if (eigen_eq) {
      auto c = eigen_coefficients(e, new_eigen);
      // strip a common factor free of the eigenfunction
      Polynomial common;
      bool first = true;
      for (auto& [a, x] : c) {
        common = first ? x.num() : gcd(common, x.num());
        first = false;
      }
      if (!first && !common.is_constant()) e = Expression::fraction(e.num(), common);
    }
    return Equation{eq.label, e, eq.definition};
  };
  for (const auto& eq : lp.spatial) out.spatial.push_back(convert(eq, true));
  for (const auto& eq : lp.temporal) out.temporal.push_back(convert(eq, true));
  if (!lp.constraints.empty()) {
    Ranking r = Ranking::default_for(tspace);
    r.orderly = false;
    SolvedSystem cs(tspace, r);
    for (const auto& c : lp.constraints) {
      Expression e = cs.reduce(convert(c, false).expr);
      if (e.is_zero()) continue;
      Equation eq{c.label, Expression::polynomial(e.num()), c.definition};
      cs.add_equation(eq);
      out.constraints.push_back(eq);
    }
  }
  out.notes = lp.notes;
  out.notes.push_back("transported through " + t.data().source_pivot + " <-> " + t.data().new_field + " with gauge " + to_text(g.g));
  return out;
}

namespace {

struct ReductionMap {
  const LaxReduction& r;
  const JetSpace& space;
  std::vector<std::string> eigen;

  Expression map_atom(AtomId a) const {
    const AtomInfo& info = atom_info(a);
    if (info.kind == AtomKind::Independent) {
      if (std::find(r.dropped_vars.begin(), r.dropped_vars.end(), info.name) != r.dropped_vars.end())
        throw InvalidArgument("explicit dependence on dropped variable '" + info.name + "'");
      return Expression::atom(a);
    }
    if (info.kind != AtomKind::Jet) return Expression::atom(a);
    MultiIndex idx = info.index;
    Expression factor(1);
    if (std::find(eigen.begin(), eigen.end(), info.name) != eigen.end()) {
      for (const auto& [v, mult] : r.separations) {
        VarId id = intern_var(v);
        int c = idx.count(id);
        if (c == 0) continue;
        factor *= pow(mult, c);
        idx = idx.minus(id, c);
      }
    }
    for (const auto& v : r.dropped_vars)
      if (idx.count(intern_var(v)) > 0) return Expression(0);
    auto fv = r.field_values.find(info.name);
    if (fv != r.field_values.end()) return factor * space.total_derivative(fv->second, idx, false);
    return factor * Expression::atom(jet_atom(info.name, idx));
  }

  Expression apply(const Expression& e) const {
    SubstitutionMap m;
    for (AtomId a : e.atoms()) {
      if (atom_info(a).kind == AtomKind::Generator) {
        const GeneratorInfo& g = generator_info(a);
        if (g.kind != GeneratorKind::ImaginaryUnit && map_atom(g.base) != Expression::atom(g.base))
          throw InvalidArgument("reduction changes the base of generator " + atom_text(a));
        continue;
      }
      Expression v = map_atom(a);
      if (v != Expression::atom(a)) m.emplace(a, v);
    }
    return substitute(e, m);
  }
};

void check_reduction(const LaxReduction& r, const std::vector<std::string>& eigen) {
  std::set<std::string> seen;
  for (const auto& [v, m] : r.separations)
    if (!seen.insert(v).second) throw InconsistentReduction("two separation rules along '" + v + "'");
  for (const auto& [f, v] : r.field_values)
    if (std::find(eigen.begin(), eigen.end(), f) != eigen.end()) throw InconsistentReduction("eigenfunction '" + f + "' given a value");
}

}  // namespace

LaxPair reduce_lax(const LaxPair& lp, const LaxReduction& r, const JetSpace& reduced_space) {
  check_reduction(r, lp.eigen);
  ReductionMap rm{r, reduced_space, lp.eigen};
  LaxPair out = lp;
  out.name = lp.name + " reduced";
  out.space = reduced_space;
  out.matrix.reset();
  out.eigen_priority.clear();
  auto conv = [&](std::vector<Equation>& eqs, bool eigen_eq) {
    std::vector<Equation> kept;
    for (auto& eq : eqs) {
      Expression e = rm.apply(eq.expr);
      if (e.is_zero()) continue;
      e = Expression::polynomial(e.num());
      if (eigen_eq) eigen_coefficients(e, out.eigen);
      if (!reduced_space.owns(e)) throw InvalidArgument("reduced equation '" + eq.label + "' leaves the reduced space");
      kept.push_back({eq.label, e, eq.definition});
    }
    eqs = kept;
  };
  conv(out.spatial, true);
  conv(out.temporal, true);
  conv(out.constraints, false);
  if (out.spectral.size() && !reduced_space.has_field(out.spectral)) out.spectral.clear();
  return out;
}

PDESystem reduce_system(const PDESystem& sys, const LaxReduction& r, const JetSpace& reduced_space, const std::string& name) {
  check_reduction(r, {});
  ReductionMap rm{r, reduced_space, {}};
  std::vector<Equation> eqs;
  for (const auto& eq : sys.equations()) {
    Expression e = rm.apply(eq.expr);
    if (e.is_zero()) continue;
    eqs.push_back({eq.label, Expression::polynomial(e.num()), eq.definition});
  }
  PDESystem out(name, reduced_space, eqs);
  out.provenance() = sys.provenance();
  return out;
}

Report lax_implies(const LaxPair& a, const LaxPair& b, const PDESystem& sys, std::size_t budget) {
  Report rep;
  rep.name = a.name + " follows from " + b.name;
  SolvedSystem es = eigen_system(b, budget);
  SolvedSystem s = system_with_constraints(b, sys, budget);
  ReduceStats st;
  for (const auto& eq : a.equations()) {
    Expression e = es.reduce(eq.expr, &st);
    if (e.is_zero()) {
      rep.add(eq.label, e);
      continue;
    }
    auto c = eigen_coefficients(e, b.eigen);
    for (auto& [jet, x] : c) rep.add(eq.label + " / " + atom_text(jet), s.reduce(x, &st));
  }
  rep.rewrite_count = st.rewrites;
  return rep;
}

}  // namespace recipro
