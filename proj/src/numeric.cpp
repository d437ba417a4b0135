#include "recipro/numeric.hpp"

#include <cstdlib>

#include "recipro/error.hpp"

namespace recipro {

std::uint64_t oracle_seed() {
  if (const char* env = std::getenv("RECIPRO_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("RECIPRO_SEED is not an integer: ") + env);
    }
  }
  return 20240611ull;
}

ManifoldSampler::ManifoldSampler(const SolvedSystem& s, std::uint64_t seed) : s_(s), rng_(seed) {}

void ManifoldSampler::resample() { values_.clear(); }

const Expression& ManifoldSampler::principal_expression(AtomId jet) {
  auto it = principal_.find(jet);
  if (it != principal_.end()) return it->second;
  std::size_t ri = *s_.rule_for(jet);
  const Rule& rule = s_.rules()[ri];
  Expression p;
  if (rule.lead == jet) {
    p = rule.rhs;
  } else {
    const MultiIndex& target = atom_info(jet).index;
    const MultiIndex& lead = atom_info(rule.lead).index;
    for (const auto& name : s_.space().independents()) {
      VarId v = intern_var(name);
      if (target.count(v) > lead.count(v)) {
        AtomId lower = jet_atom(atom_info(jet).name, target.minus(v));
        Expression base = principal_expression(lower);
        p = s_.space().total_derivative(base, v, false);
        break;
      }
    }
  }
  return principal_.emplace(jet, std::move(p)).first->second;
}

Complex ManifoldSampler::value(AtomId a) {
  auto it = values_.find(a);
  if (it != values_.end()) return it->second;
  Complex v;
  const AtomInfo& info = atom_info(a);
  if (info.kind == AtomKind::Generator) {
    v = generator_value(a, [this](AtomId b) { return value(b); });
  } else if (auto f = fixed_.find(a); f != fixed_.end()) {
    v = f->second;
  } else if (info.kind == AtomKind::Jet && s_.is_reducible(a)) {
    // copy: the principal cache may rehash while evaluating nested jets
    Expression p = principal_expression(a);
    v = eval(p);
  } else {
    v = dist_(rng_);
  }
  values_[a] = v;
  return v;
}

Complex ManifoldSampler::eval(const Expression& e) {
  return eval_complex(e, [this](AtomId b) { return value(b); });
}

NumericCheck numeric_zero_check(const Expression& e, const SolvedSystem& s, std::size_t samples, double tol, std::uint64_t seed) {
  NumericCheck c;
  ManifoldSampler sampler(s, seed);
  std::size_t attempts = 0;
  while (c.samples < samples && attempts < samples * 5) {
    ++attempts;
    sampler.resample();
    try {
      Complex v = sampler.eval(e);
      long double m = std::abs(v);
      if (!(m == m)) {
        c.ok = false;
        c.max_abs = m;
        ++c.samples;
        continue;
      }
      c.max_abs = std::max(c.max_abs, m);
      if (m >= tol) c.ok = false;
      ++c.samples;
    } catch (const NumericPoleError&) {
      ++c.poles_skipped;
    }
  }
  if (c.samples < samples) c.ok = false;
  return c;
}

}  // namespace recipro
