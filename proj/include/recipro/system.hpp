#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "recipro/expression.hpp"
#include "recipro/jet_space.hpp"

namespace recipro {

// Ranking on jets: field blocks first (earlier block ranks higher, unlisted fields lowest),
// then total order if orderly, then derivative counts along the priority list.
struct Ranking {
  std::vector<std::string> priority;
  std::vector<std::vector<std::string>> blocks;
  bool orderly = true;

  static Ranking default_for(const JetSpace& space);
  Ranking completed(const JetSpace& space) const;
  // true if jet a ranks strictly above jet b
  bool above(AtomId a, AtomId b) const;
  bool operator==(const Ranking& o) const {
    return priority == o.priority && blocks == o.blocks && orderly == o.orderly;
  }

 private:
  int block_of(const std::string& field) const;
  std::vector<VarId> ids_;
};

struct Equation {
  std::string label;
  Expression expr;
  bool definition = false;
};

class PDESystem {
 public:
  PDESystem() = default;
  PDESystem(std::string name, JetSpace space, std::vector<Equation> equations, std::optional<Ranking> ranking = std::nullopt);

  const std::string& name() const { return name_; }
  const JetSpace& space() const { return space_; }
  const std::vector<Equation>& equations() const { return equations_; }
  const std::optional<Ranking>& ranking() const { return ranking_; }
  Ranking effective_ranking() const;
  std::size_t dynamic_count() const;
  std::vector<std::string>& provenance() { return provenance_; }
  const std::vector<std::string>& provenance() const { return provenance_; }

  PDESystem with_space(const JetSpace& space) const;
  PDESystem with_ranking(const Ranking& r) const;
  PDESystem renamed(const std::string& name) const;
  PDESystem plus(const std::vector<Equation>& extra) const;
  // drop equations mentioning any of the given fields
  PDESystem without_fields(const std::vector<std::string>& fields) const;

 private:
  std::string name_;
  JetSpace space_;
  std::vector<Equation> equations_;
  std::optional<Ranking> ranking_;
  std::vector<std::string> provenance_;
};

struct Rule {
  AtomId lead;
  Expression rhs;
  std::string label;
};

struct ReduceStats {
  std::size_t rewrites = 0;
};

constexpr std::size_t kDefaultBudget = 10000;

class SolvedSystem {
 public:
  SolvedSystem(JetSpace space, Ranking ranking, std::size_t budget = kDefaultBudget);

  const JetSpace& space() const { return space_; }
  const Ranking& ranking() const { return ranking_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<std::string>& dependent_labels() const { return dependent_; }
  std::size_t budget() const { return budget_; }
  void set_budget(std::size_t b) { budget_ = b; }

  std::optional<std::size_t> rule_for(AtomId jet) const;
  bool is_reducible(AtomId a) const { return rule_for(a).has_value(); }
  Expression reduce(const Expression& e, ReduceStats* stats = nullptr) const;
  Expression normal_form(AtomId jet, ReduceStats* stats = nullptr) const;

  // maximal jet of e under the ranking, if any
  std::optional<AtomId> leading_jet(const Expression& e) const;
  // adds an equation: reduced against existing rules when its lead collides, then solved
  void add_equation(const Equation& eq);
  void add_rule(Rule r);

 private:
  Expression normal_form_impl(AtomId jet, ReduceStats& stats) const;
  struct Cache {
    std::mutex mu;
    std::unordered_map<AtomId, Expression> nf;
  };
  JetSpace space_;
  Ranking ranking_;
  std::size_t budget_;
  std::vector<Rule> rules_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_field_;
  std::vector<std::string> dependent_;
  std::shared_ptr<Cache> cache_;
};

// numerator with its monomial content removed (factors assumed nonvanishing)
Expression equation_form(const Expression& e);
// a / b is a nonzero constant times a monomial
bool proportional(const Expression& a, const Expression& b);

SolvedSystem solve_leading(const PDESystem& sys, std::optional<Ranking> ranking = std::nullopt, std::size_t budget = kDefaultBudget);
Expression reduce(const Expression& e, const SolvedSystem& s, ReduceStats* stats = nullptr);

struct Residual {
  std::string label;
  Expression value;
};

struct Report {
  std::string name;
  bool holds = true;
  std::vector<Residual> residuals;
  std::size_t rewrite_count = 0;
  std::vector<std::string> notes;

  void add(const std::string& label, const Expression& value);
  void merge(const Report& other);
  std::string text() const;
};

class ConservedPair {
 public:
  ConservedPair(Expression a, std::string x, Expression a_prime, std::string x_prime);
  const Expression& a() const { return a_; }
  const std::string& x() const { return x_; }
  const Expression& a_prime() const { return ap_; }
  const std::string& x_prime() const { return xp_; }

 private:
  Expression a_;
  std::string x_;
  Expression ap_;
  std::string xp_;
};

struct OneForm {
  std::string target;
  std::vector<std::pair<std::string, Expression>> coefficients;
  OneForm(std::string target, std::vector<std::pair<std::string, Expression>> coefficients);
};

Report verify_conserved(const ConservedPair& pair, const SolvedSystem& s);
Report verify_closed(const OneForm& form, const SolvedSystem& s);
Report systems_equivalent(const PDESystem& a, const PDESystem& b);
std::vector<ConservedPair> search_conserved(const SolvedSystem& s, const std::string& x, const std::string& x_prime, int max_degree,
                                            int max_order);

// pair of jets reducible by two rules of the same field with neither lead dividing the other
struct CriticalPair {
  std::size_t first;
  std::size_t second;
  AtomId jet;
  Expression difference;
};
// rules prolonged individually to the lcm of their leads, reduced, subtracted
std::vector<CriticalPair> critical_pairs(const SolvedSystem& s, const std::vector<std::string>& fields, ReduceStats* stats = nullptr);
Expression prolong_rule(const SolvedSystem& s, std::size_t rule, AtomId target);

}  // namespace recipro
