#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace recipro {

using AtomId = std::uint32_t;
using VarId = std::uint32_t;

VarId intern_var(std::string_view name);
const std::string& var_name(VarId id);

// Derivative counts per independent variable, sorted by VarId, zero counts omitted.
class MultiIndex {
 public:
  MultiIndex() = default;

  int count(VarId v) const;
  int order() const;
  bool empty() const { return entries_.empty(); }
  MultiIndex plus(VarId v, int k = 1) const;
  MultiIndex minus(VarId v, int k = 1) const;
  bool divides(const MultiIndex& other) const;
  MultiIndex difference(const MultiIndex& smaller) const;
  MultiIndex lcm(const MultiIndex& other) const;
  const std::vector<std::pair<VarId, int>>& entries() const { return entries_; }

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<std::pair<VarId, int>> entries_;
};

enum class AtomKind : std::uint8_t { Independent = 0, Parameter = 1, Jet = 2, Generator = 3 };

struct AtomInfo {
  AtomKind kind;
  std::string name;
  MultiIndex index;
  int order = 0;
};

AtomId independent_atom(std::string_view name);
AtomId parameter_atom(std::string_view name);
AtomId jet_atom(std::string_view field, const MultiIndex& index = {});
AtomId generator_atom(std::string_view key);
const AtomInfo& atom_info(AtomId id);

AtomId jet_derivative(AtomId jet, VarId v, int k = 1);

// Deterministic display order: kind, name, order, multi-index.
bool print_less(AtomId a, AtomId b);

std::string jet_suffix_text(const MultiIndex& index);
std::string jet_suffix_latex(const MultiIndex& index);

}  // namespace recipro
