#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "recipro/lax.hpp"

namespace recipro::catalog {

constexpr int kMaxLevel = 4;

// ---- Camassa-Holm hierarchy in 2+1 dimensions ----
std::string omega(int i);  // "Omega<i>"
std::string zvar(int i);   // "z<i>"
PDESystem chh(int n);
ConservedPair chh_pair(int n);       // D_Y P = D_X(-1/2 P Omega1)
ConservedPair chh_time_pair(int n);  // D_T P = D_X Delta
OneForm chh_one_form(int n);         // dz0 = P dX - 1/2 P Omega1 dY + Delta dT
ReciprocalTransform chh_transform(int n);
PDESystem chh_three_variable(int n);
std::vector<ConservedPair> chh_potential_laws(int n);
PDESystem cbs(int i, int n);
Expression cbs_expression(const JetSpace& space, int i, const std::string& field = "M");

// potential M from the conservative form of the three-variable system; each CBS copy reduced modulo it
struct CbsResult {
  Report report;
  PDESystem potential;
  SolvedSystem solved;
};
CbsResult cbs_check(int n);
Report verify_cbs(int n);
// equation i of a z-space system uses jets along z0, z_i, z_{i+1} only
Report verify_locality(const PDESystem& z_system, int n);

// ---- modified hierarchy ----
PDESystem mchh(int n);
ConservedPair mchh_pair(int n);
OneForm mchh_one_form(int n);
ReciprocalTransform mchh_transform(int n);
PDESystem mchh_three_variable(int n);
std::vector<ConservedPair> mchh_potential_laws(int n);
std::vector<std::string> mchh_auxiliary_fields(int n);
PDESystem mcbs(int i, int n);
PDESystem mcbs_all(int n);
// potential m of the three-variable modified system against the defining relations of mcbs_all
Report verify_mcbs_potential(int n);
struct MiuraResult {
  Report report;
  std::vector<Expression> unreduced;  // substituted CBS expressions
  SolvedSystem solved;
};
MiuraResult miura_check(int n, int sign = -1);
Report verify_miura(int n, int sign = -1);

// ---- n0 equation ----
// k empty: symbolic parameter k
PDESystem n0_system(std::optional<Rational> k);
ReciprocalTransform n0_reciprocal(std::optional<Rational> k);
PDESystem n0_transf_golden(std::optional<Rational> k);  // closure conditions, Omega_x and Omega_t equations as printed
PDESystem n0_final(const Rational& k);                  // in M
PDESystem n0_final_in_alpha(const Rational& k);         // M = alpha^-3 substituted
Expression n0_hx1_golden(std::optional<Rational> k);

struct N0Pipeline {
  ReciprocalTransform transform;
  std::vector<Equation> closure;
  Expression h_x1;              // derived value of H_{x1}
  PDESystem transformed;        // closure, Omega_x and Omega_t equations as derived
  SolvedSystem h_rules;         // H eliminated; used to transport the Lax pair
  Polynomial integrability;     // squarefree condition on k (1 if none)
  std::vector<std::string> notes;
};
N0Pipeline n0_pipeline(std::optional<Rational> k);
// d^2 x1 = 0 against the printed closure conditions, each up to a nonzero factor
Report verify_n0_closure(std::optional<Rational> k);

// parameter-only content of e's numerator with respect to every non-parameter atom
Polynomial parameter_content(const Expression& e);
Polynomial squarefree_part(const Polynomial& p, AtomId var);

// ---- reductions ----
JetSpace reduced_space();
LaxReduction n0_reduction();  // eps = 0, Omega = a0, no T dependence, psi_T = lambda psi
PDESystem n0_reduced_from_final(const Rational& k);
PDESystem n0_reduced_golden(const Rational& a1, const Rational& a2);
PDESystem dp_golden();                   // q0 = 0, a0 = -1
PDESystem dp_reduced_with_integral();    // A1 = 1 branch plus the integrated first relation
PDESystem vakhnenko_golden();            // a0 = 0, with q0
PDESystem vakhnenko_reduced_with_integral();

// ---- Lax pairs ----
LaxPair chh_lax(int n, bool break_constraint = false);
LaxPair mchh_lax(int n, bool break_constraint = false);
LaxPair n0_lax(std::optional<Rational> k);
LaxPair n0_psi_golden(const Rational& k);
LaxPair n0_psi_golden_in_alpha(const Rational& k);  // M = alpha^-3
LaxPair n0_psi_transported(const Rational& k);
LaxPair n0_reduced_lax_golden(const Rational& a1, const Rational& a2);
LaxPair dp_lax();
LaxPair vakhnenko_lax(bool as_printed = false);
std::vector<std::pair<std::string, LaxPair>> lax_catalog(int n = 1);

// ---- scenarios ----
struct Scenario {
  std::string name;
  std::string description;
  std::string expected;  // "holds" or "fails"
  std::function<Report(int n, std::size_t budget)> run;
};
const std::vector<Scenario>& scenarios();
const Scenario& scenario(const std::string& name);

}  // namespace recipro::catalog
