#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>

#include "recipro/system.hpp"

namespace recipro {

// Seed for numeric oracles; RECIPRO_SEED overrides the built-in default.
std::uint64_t oracle_seed();

// Draws points on the solution manifold of a solved system: parametric atoms uniform in
// [1,2], principal jets evaluated from the unreduced prolonged rules along the same
// rule choice and derivative path that reduction uses.
class ManifoldSampler {
 public:
  ManifoldSampler(const SolvedSystem& s, std::uint64_t seed);

  void resample();
  void fix(AtomId a, double v) { fixed_[a] = v; }
  Complex value(AtomId a);
  Complex eval(const Expression& e);

 private:
  const Expression& principal_expression(AtomId jet);

  const SolvedSystem& s_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> dist_{1.0, 2.0};
  std::unordered_map<AtomId, double> fixed_;
  std::unordered_map<AtomId, Complex> values_;
  std::unordered_map<AtomId, Expression> principal_;
};

struct NumericCheck {
  std::size_t samples = 0;
  std::size_t poles_skipped = 0;
  long double max_abs = 0;
  bool ok = true;
};

// evaluates e (unreduced) on sampled manifold points; ok iff every |value| < tol
NumericCheck numeric_zero_check(const Expression& e, const SolvedSystem& s, std::size_t samples = 10, double tol = 1e-6,
                                std::uint64_t seed = oracle_seed());

}  // namespace recipro
