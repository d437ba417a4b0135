#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "recipro/system.hpp"

namespace recipro {

// A swap of one independent variable with a dependent one. The source pivot x_p becomes
// the target field `new_field`; the target pivot z_p is the potential of the closed one-form
// dz_p = sum_i one_form[x_i] dx_i. `gradient[z_j]` holds the target-side value of the
// derivative of the new field along z_j.
struct TransformData {
  JetSpace source;
  JetSpace target;
  std::string source_pivot;
  std::string target_pivot;
  std::vector<std::pair<std::string, std::string>> renames;  // source var -> target var
  std::string new_field;
  std::map<std::string, Expression> gradient;         // target var -> target expression
  std::map<std::string, Expression> one_form;         // source var -> source expression
  std::map<std::string, Expression> relations;        // source field -> target expression
  std::map<std::string, Expression> inverse_relations;  // target field -> source expression
  std::map<std::string, Expression> aux;              // target aux var -> source value of new_field's derivative
  std::string source_aux_field;
  std::map<std::string, Expression> source_aux;       // source aux var -> target value of source_aux_field's derivative
  std::vector<std::string> retained;
  std::vector<std::string> notes;
};

struct ApplyOptions {
  std::vector<Equation> extra_relations;  // target-side relations used in elimination
  bool interreduce_retained = true;
  bool adjoin_closure = true;
  std::size_t budget = kDefaultBudget;
  std::string name;
};

class ReciprocalTransform {
 public:
  explicit ReciprocalTransform(TransformData d);

  const TransformData& data() const { return *d_; }
  const JetSpace& source() const { return d_->source; }
  const JetSpace& target() const { return d_->target; }

  std::string target_var(const std::string& source_var) const;
  std::vector<std::string> target_aux_vars() const;
  // transformed total derivative D~_{x_v} acting on a target expression
  Expression operator_apply(const std::string& source_var, const Expression& f) const;
  // generic rules: source jets of every source field up to `order`, in terms of the same-named target field
  std::vector<std::pair<AtomId, Expression>> derivative_rules(int order) const;
  JetSpace rule_space() const;
  // source jet with fields replaced through the inverse relations
  Expression eliminated_rule(AtomId source_jet) const;
  Expression map_expression(const Expression& e) const;
  std::vector<Equation> closure_conditions() const;

  PDESystem apply(const PDESystem& sys, const ApplyOptions& opts = {}) const;
  ReciprocalTransform inverse() const;
  // extra target fields and relations (eigenfunction gauges, nonlocal fields)
  ReciprocalTransform with_relations(const std::vector<std::string>& target_fields, const std::map<std::string, Expression>& relations,
                                     const std::vector<std::string>& retained = {}) const;

 private:
  Expression base_value(const std::string& field, bool generic) const;
  Expression rule_impl(AtomId jet, bool generic) const;
  struct Cache {
    std::mutex mu;
    std::unordered_map<AtomId, Expression> generic;
    std::unordered_map<AtomId, Expression> eliminated;
    JetSpace rules;
  };
  std::shared_ptr<const TransformData> d_;
  std::shared_ptr<Cache> cache_;
};

struct BuildOptions {
  std::string new_field = "X";
  std::string target_pivot = "z0";
  std::vector<std::pair<std::string, std::string>> renames;  // source var -> target var
  std::vector<std::pair<std::string, Expression>> aux;       // target var -> source value of new field derivative
  std::vector<std::string> target_vars;                      // optional explicit order of target variables
  std::vector<std::string> retained;
  int target_order = 8;
};

// dz = pair.a() dx' + pair.a_prime() dx + sum extra; the pivot must carry a nonzero coefficient
ReciprocalTransform build_transform(const ConservedPair& pair, const std::map<std::string, Expression>& extra_coeffs,
                                    const std::string& pivot, const PDESystem& source_system, const BuildOptions& opts);
ReciprocalTransform build_transform(const ConservedPair& pair, const std::map<std::string, Expression>& extra_coeffs,
                                    const std::string& pivot, const JetSpace& source, const BuildOptions& opts);

// Transformation prescribed by the target-side gradient of the new field (x_p = X(z)).
struct GradientSpec {
  JetSpace source;
  JetSpace target;
  std::string source_pivot;
  std::string target_pivot;
  std::vector<std::pair<std::string, std::string>> renames;
  std::string new_field;
  std::map<std::string, Expression> gradient;
  std::vector<std::string> retained;
};
ReciprocalTransform build_from_gradient(const GradientSpec& spec);

PDESystem potentialize(const PDESystem& sys, const std::vector<ConservedPair>& laws, const std::string& new_field,
                       Report* closure_report = nullptr);

}  // namespace recipro
