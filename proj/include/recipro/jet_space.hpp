#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "recipro/expression.hpp"
#include "recipro/parse.hpp"

namespace recipro {

class JetSpace {
 public:
  JetSpace() = default;
  static JetSpace declare(const std::vector<std::string>& independents, const std::vector<std::string>& dependents, int max_order = 4,
                          const std::vector<std::string>& parameters = {});

  const std::vector<std::string>& independents() const { return d_->independents; }
  const std::vector<std::string>& dependents() const { return d_->dependents; }
  const std::vector<std::string>& parameters() const { return d_->parameters; }
  int max_order() const { return d_->max_order; }
  bool valid() const { return d_ != nullptr; }

  bool has_independent(const std::string& name) const;
  bool has_field(const std::string& name) const;
  bool has_parameter(const std::string& name) const;
  int var_position(VarId v) const;

  Expression var(const std::string& name) const;
  Expression field(const std::string& name) const;
  Expression param(const std::string& name) const;
  Expression jet(const std::string& field, const std::map<std::string, int>& counts) const;
  AtomId jet_id(const std::string& field, const std::map<std::string, int>& counts) const;

  std::size_t jet_count_per_field() const;
  std::vector<AtomId> jets(const std::string& field, int max_order) const;
  // every atom of e is an independent, parameter, field jet of this space, or a generator over them
  bool owns(const Expression& e) const;
  bool owns_atom(AtomId a) const;

  Expression total_derivative(const Expression& e, const std::string& var) const;
  Expression total_derivative(const Expression& e, VarId var, bool check_order = true) const;
  Expression total_derivative(const Expression& e, const MultiIndex& m, bool check_order = true) const;

  // larger space with extra fields and parameters (same independents)
  JetSpace extended(const std::vector<std::string>& fields, const std::vector<std::string>& parameters = {}, int max_order = 0) const;
  JetSpace with_max_order(int p) const;
  bool operator==(const JetSpace& o) const;

  Expression parse(const std::string& text) const;

 private:
  struct Data {
    std::vector<std::string> independents;
    std::vector<std::string> dependents;
    std::vector<std::string> parameters;
    std::vector<VarId> var_ids;
    std::vector<AtomId> var_atoms;
    int max_order = 4;
  };
  std::shared_ptr<const Data> d_;
};

// replaces every jet of `field` by the matching total derivative of `value`
Expression substitute_field(const JetSpace& space, const Expression& e, const std::string& field, const Expression& value);

// Resolves names against a space; `(e)_x` and D(e, x) take total derivatives.
class SpaceScope : public ParseScope {
 public:
  explicit SpaceScope(JetSpace space) : space_(std::move(space)) {}
  Expression identifier(const std::string& name, const Token& at) const override;
  Expression jet(const std::string& field, const std::map<std::string, int>& counts, const Token& at) const override;
  bool is_variable(const std::string& name) const override;
  Expression total_derivative(const Expression& e, const std::string& var, const Token& at) const override;

 private:
  JetSpace space_;
};

}  // namespace recipro
