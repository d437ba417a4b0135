#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "recipro/transform.hpp"

namespace recipro {

enum class LaxKind { Scalar, Matrix2 };

// psi_x = U psi,  psi_t = sum_v s_v psi_v + V psi  (row-major 2x2 blocks)
struct MatrixForm {
  std::string x;
  std::string t;
  std::array<Expression, 4> U;
  std::vector<std::pair<std::string, Expression>> transport;
  std::array<Expression, 4> V;
};

struct LaxPair {
  std::string name;
  LaxKind kind = LaxKind::Scalar;
  JetSpace space;
  std::vector<std::string> eigen;
  std::vector<Equation> spatial;
  std::vector<Equation> temporal;
  std::string spectral;  // field name of a non-isospectral parameter, if any
  std::vector<Equation> constraints;
  std::optional<MatrixForm> matrix;
  std::vector<std::string> eigen_priority;  // empty: reversed independents
  std::vector<std::string> notes;

  std::vector<Equation> equations() const;
};

// builds the component equations of a 2x2 pair
LaxPair matrix_pair(std::string name, JetSpace space, std::array<std::string, 2> eigen, MatrixForm form, std::string spectral,
                    std::vector<Equation> constraints);

struct GaugeFactor {
  Expression g;
  explicit GaugeFactor(Expression g);
};

// throws NotLinearInEigenfunction unless e is linear homogeneous in the eigenfunction jets
std::map<AtomId, Expression> eigen_coefficients(const Expression& e, const std::vector<std::string>& eigen);

SolvedSystem eigen_system(const LaxPair& lp, std::size_t budget = kDefaultBudget);
// cross-derivative conditions with eigenfunction jets eliminated; coefficients of the remaining jets
std::vector<Expression> compatibility_residual(const LaxPair& lp, std::size_t budget = kDefaultBudget);
// U_t - sum s_v U_v - W_x + [U, W] with W = s_x U + V, entries reduced by the constraints
std::vector<Expression> zero_curvature(const LaxPair& lp, std::size_t budget = kDefaultBudget);

// sys on the pair's space with the spectral constraints adjoined; spectral field ranked highest
SolvedSystem system_with_constraints(const LaxPair& lp, const PDESystem& sys, std::size_t budget = kDefaultBudget);

enum class CompatibilityRoute { CrossDerivative, ZeroCurvature };
Report verify_yields(const LaxPair& lp, const PDESystem& sys, CompatibilityRoute route = CompatibilityRoute::CrossDerivative,
                     std::size_t budget = kDefaultBudget);

LaxPair transform_lax(const ReciprocalTransform& t, const LaxPair& lp, const GaugeFactor& g, const std::vector<std::string>& new_eigen,
                      const SolvedSystem* target_rules = nullptr);

struct LaxReduction {
  // eigenfunction jets along `var` pick up `multiplier` per derivative (e.g. psi_T = lambda psi)
  std::vector<std::pair<std::string, Expression>> separations;
  std::map<std::string, Expression> field_values;  // field -> value in the reduced space
  std::vector<std::string> dropped_vars;           // independents the reduced fields no longer depend on
};

LaxPair reduce_lax(const LaxPair& lp, const LaxReduction& r, const JetSpace& reduced_space);
// same substitution applied to a system; equations that vanish are dropped
PDESystem reduce_system(const PDESystem& sys, const LaxReduction& r, const JetSpace& reduced_space, const std::string& name);

// each equation of `a` reduces to zero modulo the eigenfunction rules of `b` combined with sys
Report lax_implies(const LaxPair& a, const LaxPair& b, const PDESystem& sys, std::size_t budget = kDefaultBudget);

bool is_linear_homogeneous(const Expression& e, const std::vector<std::string>& eigen);

}  // namespace recipro
