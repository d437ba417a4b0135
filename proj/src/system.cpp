#include "recipro/system.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "recipro/error.hpp"

namespace recipro {

// ---------------------------------------------------------------------------
// Ranking

Ranking Ranking::default_for(const JetSpace& space) {
  Ranking r;
  r.priority.assign(space.independents().rbegin(), space.independents().rend());
  return r.completed(space);
}

Ranking Ranking::completed(const JetSpace& space) const {
  Ranking r = *this;
  for (auto it = space.independents().rbegin(); it != space.independents().rend(); ++it)
    if (std::find(r.priority.begin(), r.priority.end(), *it) == r.priority.end()) r.priority.push_back(*it);
  r.ids_.clear();
  for (const auto& v : r.priority) r.ids_.push_back(intern_var(v));
  return r;
}

int Ranking::block_of(const std::string& field) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (std::find(blocks[i].begin(), blocks[i].end(), field) != blocks[i].end()) return static_cast<int>(i);
  return static_cast<int>(blocks.size());
}

bool Ranking::above(AtomId a, AtomId b) const {
  if (a == b) return false;
  const AtomInfo& x = atom_info(a);
  const AtomInfo& y = atom_info(b);
  if (x.name != y.name) {
    int bx = block_of(x.name), by = block_of(y.name);
    if (bx != by) return bx < by;
  }
  if (orderly && x.order != y.order) return x.order > y.order;
  std::vector<VarId> local;
  const std::vector<VarId>* ids = &ids_;
  if (ids_.size() != priority.size()) {
    for (const auto& v : priority) local.push_back(intern_var(v));
    ids = &local;
  }
  for (VarId v : *ids) {
    int cx = x.index.count(v), cy = y.index.count(v);
    if (cx != cy) return cx > cy;
  }
  if (x.order != y.order) return x.order > y.order;
  if (x.name != y.name) return x.name < y.name;
  return x.index > y.index;
}

// ---------------------------------------------------------------------------
// PDESystem

PDESystem::PDESystem(std::string name, JetSpace space, std::vector<Equation> equations, std::optional<Ranking> ranking)
    : name_(std::move(name)), space_(std::move(space)), equations_(std::move(equations)), ranking_(std::move(ranking)) {
  for (const auto& eq : equations_)
    if (!space_.owns(eq.expr)) throw InvalidArgument("equation '" + eq.label + "' of system '" + name_ + "' has atoms outside its space");
}

Ranking PDESystem::effective_ranking() const {
  return ranking_ ? ranking_->completed(space_) : Ranking::default_for(space_);
}

std::size_t PDESystem::dynamic_count() const {
  return static_cast<std::size_t>(std::count_if(equations_.begin(), equations_.end(), [](const Equation& e) { return !e.definition; }));
}

PDESystem PDESystem::with_space(const JetSpace& space) const {
  PDESystem r(name_, space, equations_, ranking_);
  r.provenance_ = provenance_;
  return r;
}

PDESystem PDESystem::with_ranking(const Ranking& rk) const {
  PDESystem r = *this;
  r.ranking_ = rk;
  return r;
}

PDESystem PDESystem::renamed(const std::string& name) const {
  PDESystem r = *this;
  r.name_ = name;
  return r;
}

PDESystem PDESystem::plus(const std::vector<Equation>& extra) const {
  std::vector<Equation> eqs = equations_;
  eqs.insert(eqs.end(), extra.begin(), extra.end());
  PDESystem r(name_, space_, eqs, ranking_);
  r.provenance_ = provenance_;
  return r;
}

PDESystem PDESystem::without_fields(const std::vector<std::string>& fields) const {
  std::vector<Equation> keep;
  for (const auto& eq : equations_) {
    bool hit = false;
    for (AtomId a : eq.expr.atoms()) {
      const AtomInfo& info = atom_info(a);
      if (info.kind == AtomKind::Jet && std::find(fields.begin(), fields.end(), info.name) != fields.end()) hit = true;
    }
    if (!hit) keep.push_back(eq);
  }
  PDESystem r(name_, space_, keep, ranking_);
  r.provenance_ = provenance_;
  return r;
}

// ---------------------------------------------------------------------------
// SolvedSystem

SolvedSystem::SolvedSystem(JetSpace space, Ranking ranking, std::size_t budget)
    : space_(std::move(space)), ranking_(ranking.completed(space_)), budget_(budget), cache_(std::make_shared<Cache>()) {}

std::optional<std::size_t> SolvedSystem::rule_for(AtomId jet) const {
  const AtomInfo& info = atom_info(jet);
  if (info.kind != AtomKind::Jet) return std::nullopt;
  auto it = by_field_.find(info.name);
  if (it == by_field_.end()) return std::nullopt;
  std::optional<std::size_t> best;
  for (std::size_t i : it->second) {
    const AtomInfo& lead = atom_info(rules_[i].lead);
    if (!lead.index.divides(info.index)) continue;
    if (!best || ranking_.above(rules_[i].lead, rules_[*best].lead)) best = i;
  }
  return best;
}

std::optional<AtomId> SolvedSystem::leading_jet(const Expression& e) const {
  std::optional<AtomId> best;
  for (AtomId a : e.atoms()) {
    const AtomInfo& info = atom_info(a);
    if (info.kind != AtomKind::Jet || !space_.has_field(info.name)) continue;
    if (!best || ranking_.above(a, *best)) best = a;
  }
  return best;
}

Expression SolvedSystem::reduce(const Expression& e, ReduceStats* stats) const {
  ReduceStats local;
  ReduceStats& st = stats ? *stats : local;
  SubstitutionMap m;
  for (AtomId a : e.atoms())
    if (rule_for(a)) m.emplace(a, normal_form_impl(a, st));
  if (m.empty()) return e;
  return substitute(e, m);
}

Expression SolvedSystem::normal_form(AtomId jet, ReduceStats* stats) const {
  ReduceStats local;
  return normal_form_impl(jet, stats ? *stats : local);
}

Expression SolvedSystem::normal_form_impl(AtomId jet, ReduceStats& stats) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->nf.find(jet);
    if (it != cache_->nf.end()) return it->second;
  }
  auto ri = rule_for(jet);
  if (!ri) return Expression::atom(jet);
  if (++stats.rewrites > budget_)
    throw NonTermination("rewrite budget of " + std::to_string(budget_) + " exceeded while reducing " + atom_text(jet));
  const Rule& rule = rules_[*ri];
  Expression value;
  if (rule.lead == jet) {
    value = reduce(rule.rhs, &stats);
  } else {
    const MultiIndex& target = atom_info(jet).index;
    const MultiIndex& lead = atom_info(rule.lead).index;
    VarId step = 0;
    bool found = false;
    for (const auto& name : space_.independents()) {
      VarId v = intern_var(name);
      if (target.count(v) > lead.count(v)) {
        step = v;
        found = true;
        break;
      }
    }
    if (!found) throw InvalidArgument("jet " + atom_text(jet) + " uses a variable outside the space");
    AtomId lower = jet_atom(atom_info(jet).name, target.minus(step));
    value = reduce(space_.total_derivative(normal_form_impl(lower, stats), step, false), &stats);
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->nf.emplace(jet, value);
  return value;
}

void SolvedSystem::add_rule(Rule r) {
  by_field_[atom_info(r.lead).name].push_back(rules_.size());
  rules_.push_back(std::move(r));
  cache_ = std::make_shared<Cache>();
}

void SolvedSystem::add_equation(const Equation& eq) {
  Expression e = eq.expr;
  for (;;) {
    if (e.is_zero()) {
      dependent_.push_back(eq.label);
      return;
    }
    auto lead = leading_jet(e);
    if (!lead) throw NotSolvable("equation '" + eq.label + "' contains no jet of the space");
    if (is_reducible(*lead)) {
      e = reduce(e);
      continue;
    }
    const Polynomial& n = e.num();
    if (e.den().contains(*lead) || n.degree_in(*lead) != 1)
      throw NotSolvable("equation '" + eq.label + "' is not affine in its leading jet " + atom_text(*lead));
    auto c = n.coefficients_in(*lead);
    Expression rhs = -Expression::fraction(c[0], c[1]);
    add_rule({*lead, rhs, eq.label});
    return;
  }
}

Expression equation_form(const Expression& e) {
  if (e.is_zero()) return e;
  Monomial m = e.num().monomial_content();
  Polynomial n = m.is_one() ? e.num() : e.num().divide_monomial(m);
  return Expression::polynomial(n * (Rational(1) / n.leading_coefficient()));
}

bool proportional(const Expression& a, const Expression& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  Expression r = a / b;
  return r.num().is_monomial() && r.den().is_monomial();
}

SolvedSystem solve_leading(const PDESystem& sys, std::optional<Ranking> ranking, std::size_t budget) {
  SolvedSystem s(sys.space(), ranking ? *ranking : sys.effective_ranking(), budget);
  for (const auto& eq : sys.equations()) s.add_equation(eq);
  return s;
}

Expression reduce(const Expression& e, const SolvedSystem& s, ReduceStats* stats) { return s.reduce(e, stats); }

Expression prolong_rule(const SolvedSystem& s, std::size_t rule, AtomId target) {
  const Rule& r = s.rules().at(rule);
  const MultiIndex& lead = atom_info(r.lead).index;
  const MultiIndex& t = atom_info(target).index;
  if (!lead.divides(t) || atom_info(r.lead).name != atom_info(target).name)
    throw InvalidArgument("target jet is not a prolongation of the rule's lead");
  return s.space().total_derivative(r.rhs, t.difference(lead), false);
}

std::vector<CriticalPair> critical_pairs(const SolvedSystem& s, const std::vector<std::string>& fields, ReduceStats* stats) {
  std::vector<CriticalPair> out;
  const auto& rules = s.rules();
  auto prolong_reduced = [&](std::size_t i, const MultiIndex& target) {
    Expression cur = s.reduce(rules[i].rhs, stats);
    MultiIndex at = atom_info(rules[i].lead).index;
    for (const auto& name : s.space().independents()) {
      VarId v = intern_var(name);
      while (at.count(v) < target.count(v)) {
        cur = s.reduce(s.space().total_derivative(cur, v, false), stats);
        at = at.plus(v);
      }
    }
    return cur;
  };
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const AtomInfo& li = atom_info(rules[i].lead);
    if (!fields.empty() && std::find(fields.begin(), fields.end(), li.name) == fields.end()) continue;
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      const AtomInfo& lj = atom_info(rules[j].lead);
      if (lj.name != li.name) continue;
      if (li.index.divides(lj.index) || lj.index.divides(li.index)) continue;
      MultiIndex l = li.index.lcm(lj.index);
      Expression d = prolong_reduced(i, l) - prolong_reduced(j, l);
      out.push_back({i, j, jet_atom(li.name, l), s.reduce(d, stats)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports and conservation checks

void Report::add(const std::string& label, const Expression& value) {
  residuals.push_back({label, value});
  if (!value.is_zero()) holds = false;
}

void Report::merge(const Report& other) {
  for (const auto& r : other.residuals) add(other.name.empty() ? r.label : other.name + ": " + r.label, r.value);
  if (!other.holds) holds = false;
  rewrite_count += other.rewrite_count;
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

std::string Report::text() const {
  std::ostringstream os;
  os << (holds ? "HOLDS " : "FAILS ") << name << " (rewrites: " << rewrite_count << ")\n";
  for (const auto& r : residuals) os << "  " << r.label << ": " << (r.value.is_zero() ? "0" : to_text(r.value)) << "\n";
  for (const auto& n : notes) os << "  note: " << n << "\n";
  return os.str();
}

ConservedPair::ConservedPair(Expression a, std::string x, Expression a_prime, std::string x_prime)
    : a_(std::move(a)), x_(std::move(x)), ap_(std::move(a_prime)), xp_(std::move(x_prime)) {
  if (x_ == xp_) throw InvalidArgument("conserved pair needs two distinct variables");
  if (a_ == ap_) throw InvalidArgument("conserved pair needs distinct density and flux");
}

OneForm::OneForm(std::string t, std::vector<std::pair<std::string, Expression>> c) : target(std::move(t)), coefficients(std::move(c)) {
  bool any = std::any_of(coefficients.begin(), coefficients.end(), [](const auto& p) { return !p.second.is_zero(); });
  if (!any) throw InvalidArgument("one-form needs a nonzero coefficient");
}

Report verify_conserved(const ConservedPair& pair, const SolvedSystem& s) {
  Report r;
  r.name = "conserved D_" + pair.x() + "(" + to_text(pair.a()) + ") = D_" + pair.x_prime() + "(" + to_text(pair.a_prime()) + ")";
  ReduceStats st;
  const JetSpace& sp = s.space();
  Expression res = sp.total_derivative(pair.a(), intern_var(pair.x()), false) - sp.total_derivative(pair.a_prime(), intern_var(pair.x_prime()), false);
  r.add("residual", s.reduce(res, &st));
  r.rewrite_count = st.rewrites;
  return r;
}

Report verify_closed(const OneForm& form, const SolvedSystem& s) {
  Report r;
  r.name = "closed d" + form.target;
  ReduceStats st;
  const JetSpace& sp = s.space();
  const auto& c = form.coefficients;
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = a + 1; b < c.size(); ++b) {
      Expression res = sp.total_derivative(c[b].second, intern_var(c[a].first), false) -
                       sp.total_derivative(c[a].second, intern_var(c[b].first), false);
      r.add("(" + c[a].first + "," + c[b].first + ")", s.reduce(res, &st));
    }
  r.rewrite_count = st.rewrites;
  return r;
}

Report systems_equivalent(const PDESystem& a, const PDESystem& b) {
  Report r;
  r.name = a.name() + " ~ " + b.name();
  for (const auto& eq : a.equations())
    if (!b.space().owns(eq.expr)) {
      r.holds = false;
      r.notes.push_back("equation '" + eq.label + "' of " + a.name() + " uses atoms outside " + b.name() + "'s space");
    }
  for (const auto& eq : b.equations())
    if (!a.space().owns(eq.expr)) {
      r.holds = false;
      r.notes.push_back("equation '" + eq.label + "' of " + b.name() + " uses atoms outside " + a.name() + "'s space");
    }
  if (!r.holds) return r;
  ReduceStats st;
  // a system without its own ranking borrows the other's
  std::optional<Ranking> ra = a.ranking() ? a.ranking() : b.ranking();
  std::optional<Ranking> rb = b.ranking() ? b.ranking() : a.ranking();
  SolvedSystem sa = solve_leading(a.with_space(b.space().extended(a.space().dependents(), a.space().parameters())), ra);
  SolvedSystem sb = solve_leading(b.with_space(a.space().extended(b.space().dependents(), b.space().parameters())), rb);
  for (const auto& eq : a.equations()) r.add(a.name() + "/" + eq.label, sb.reduce(eq.expr, &st));
  for (const auto& eq : b.equations()) r.add(b.name() + "/" + eq.label, sa.reduce(eq.expr, &st));
  r.rewrite_count = st.rewrites;
  return r;
}

// ---------------------------------------------------------------------------
// conservation law search

namespace {

// reduced row echelon form in place; returns pivot columns
std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  m.resize(row);
  return pivots;
}

std::vector<std::vector<Rational>> nullspace(std::vector<std::vector<Rational>> m, std::size_t cols) {
  auto pivots = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
    out.push_back(std::move(v));
  }
  return out;
}

void enumerate_monomials(const std::vector<AtomId>& atoms, int max_degree, std::vector<Monomial>& out) {
  std::vector<Monomial> layer{Monomial()};
  for (int d = 1; d <= max_degree; ++d) {
    std::set<std::vector<std::pair<AtomId, int>>> seen;
    std::vector<Monomial> nextl;
    for (const auto& m : layer)
      for (AtomId a : atoms) {
        Monomial n = m * Monomial::of(a);
        if (seen.insert(n.factors()).second) nextl.push_back(n);
      }
    out.insert(out.end(), nextl.begin(), nextl.end());
    layer = std::move(nextl);
  }
}

// coordinates of an expression in the monomial basis, if it lies in its span
std::optional<std::vector<Rational>> coordinates(const Expression& e, const std::vector<Monomial>& basis) {
  std::vector<Rational> v(basis.size(), 0);
  if (e.is_zero()) return v;
  if (!e.is_polynomial()) return std::nullopt;
  for (const auto& t : e.num().terms()) {
    auto it = std::find(basis.begin(), basis.end(), t.mono);
    if (it == basis.end()) return std::nullopt;
    v[static_cast<std::size_t>(it - basis.begin())] = t.coef;
  }
  return v;
}

Polynomial lcm(const Polynomial& a, const Polynomial& b) {
  Polynomial g = gcd(a, b);
  return (*a.divide_exact(g)) * b;
}

}  // namespace

std::vector<ConservedPair> search_conserved(const SolvedSystem& s, const std::string& x, const std::string& x_prime, int max_degree,
                                            int max_order) {
  if (max_degree < 1 || max_order < 0) throw InvalidArgument("search bounds must be positive");
  const JetSpace& sp = s.space();
  VarId vx = intern_var(x), vxp = intern_var(x_prime);
  std::vector<AtomId> param;
  for (const auto& f : sp.dependents())
    for (AtomId j : sp.jets(f, max_order))
      if (!s.is_reducible(j)) param.push_back(j);
  std::vector<Monomial> basis;
  enumerate_monomials(param, max_degree, basis);
  std::size_t n = basis.size();
  if (2 * n > 10000) throw AnsatzTooLarge("ansatz has " + std::to_string(2 * n) + " coefficients");
  // column k < n: coefficient of basis[k] in A; column n + k: in A'
  std::vector<Expression> cols;
  cols.reserve(2 * n);
  for (const auto& m : basis) cols.push_back(s.reduce(sp.total_derivative(Expression::polynomial(Polynomial::term(m, 1)), vx, false)));
  for (const auto& m : basis) cols.push_back(-s.reduce(sp.total_derivative(Expression::polynomial(Polynomial::term(m, 1)), vxp, false)));
  Polynomial common(1);
  for (const auto& c : cols)
    if (!c.is_zero()) common = lcm(common, c.den());
  std::map<std::vector<std::pair<AtomId, int>>, std::size_t> row_of;
  std::vector<std::vector<Rational>> rows;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k].is_zero()) continue;
    Polynomial scaled = cols[k].num() * (*common.divide_exact(cols[k].den()));
    for (const auto& t : scaled.terms()) {
      auto [it, inserted] = row_of.try_emplace(t.mono.factors(), rows.size());
      if (inserted) rows.emplace_back(2 * n, Rational(0));
      rows[it->second][k] += t.coef;
    }
  }
  auto null = nullspace(rows, 2 * n);

  // trivial pairs A = D_{x'} F, A' = D_x F
  std::vector<Monomial> fbasis;
  std::vector<AtomId> lower;
  for (AtomId a : param)
    if (atom_info(a).order < max_order) lower.push_back(a);
  enumerate_monomials(lower, max_degree, fbasis);
  std::vector<std::vector<Rational>> span;
  for (const auto& f : fbasis) {
    Expression fe = Expression::polynomial(Polynomial::term(f, 1));
    auto ca = coordinates(s.reduce(sp.total_derivative(fe, vxp, false)), basis);
    auto cb = coordinates(s.reduce(sp.total_derivative(fe, vx, false)), basis);
    if (!ca || !cb) continue;
    std::vector<Rational> v(*ca);
    v.insert(v.end(), cb->begin(), cb->end());
    span.push_back(std::move(v));
  }
  std::size_t trivial_rank = 0;
  {
    auto t = span;
    trivial_rank = rref(t, 2 * n).size();
  }
  std::vector<ConservedPair> out;
  for (const auto& v : null) {
    auto trial = span;
    trial.push_back(v);
    if (rref(trial, 2 * n).size() == trivial_rank) continue;
    span.push_back(v);
    ++trivial_rank;
    Polynomial a, ap;
    for (std::size_t k = 0; k < n; ++k) {
      if (v[k] != 0) a = a + Polynomial::term(basis[k], v[k]);
      if (v[n + k] != 0) ap = ap + Polynomial::term(basis[k], v[n + k]);
    }
    Expression ea = Expression::polynomial(a), eap = Expression::polynomial(ap);
    if (ea == eap) continue;
    out.emplace_back(ea, x, eap, x_prime);
  }
  return out;
}

}  // namespace recipro
