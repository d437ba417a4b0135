#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recipro/lax.hpp"

// Input language for .rcp files:
//
//   space chh { indep: X, Y, T; dep: P, Delta, Omega1; param: k; order: 4 }
//   system chh1 in chh { eq PY: P_Y = -1/2*(P*Omega1)_X; def DX: P_T = Delta_X; priority: Y, T, X }
//   conserved density on chh1 { A: P on Y; B: -1/2*P*Omega1 on X }
//   transform tr { pivot: X; via: density; extra: T = Delta; rename: Y -> z1, T -> z2 }
//   lax pair on chh1 { eigen: Phi; spectral: lambda; spatial s: Phi_XX = 0; temporal t: ...; constraint c: lambda_X = 0 }
//   scenario s { command: lax-check; target: pair; expect: holds }
//
// Names are resolved while parsing; an omitted `in`/`on` refers to the latest space or system.

namespace recipro::dsl {

struct Position {
  int line = 0;
  int col = 0;
};

struct EquationItem {
  std::string label;
  bool definition = false;
  Expression lhs;
  Expression rhs;
  Position at;
  Expression expr() const { return lhs - rhs; }
  bool operator==(const EquationItem& o) const;
};

struct SpaceBlock {
  std::string name;
  std::vector<std::string> indep;
  std::vector<std::string> dep;
  std::vector<std::string> params;
  int order = 4;
  Position at;
  bool operator==(const SpaceBlock& o) const;
};

struct SystemBlock {
  std::string name;
  std::string space;
  std::vector<EquationItem> equations;
  std::vector<std::string> priority;
  std::vector<std::vector<std::string>> blocks;
  std::optional<bool> orderly;
  Position at;
  bool operator==(const SystemBlock& o) const;
};

struct ConservedBlock {
  std::string name;
  std::string system;
  Expression a;
  std::string x;
  Expression a_prime;
  std::string x_prime;
  Position at;
  bool operator==(const ConservedBlock& o) const;
};

struct TransformBlock {
  std::string name;
  std::string pivot;
  std::string via;
  std::vector<std::pair<std::string, Expression>> extra;
  std::vector<std::pair<std::string, std::string>> renames;
  std::vector<std::pair<std::string, Expression>> aux;
  std::string new_field = "X";
  std::string target = "z0";
  std::vector<std::string> vars;
  std::vector<std::string> retained;
  Position at;
  bool operator==(const TransformBlock& o) const;
};

struct LaxBlock {
  std::string name;
  std::string system;
  std::vector<std::string> eigen;
  std::string spectral;
  std::vector<std::string> params;
  std::vector<EquationItem> spatial;
  std::vector<EquationItem> temporal;
  std::vector<EquationItem> constraints;
  std::vector<std::string> priority;
  Position at;
  bool operator==(const LaxBlock& o) const;
};

struct ScenarioBlock {
  std::string name;
  std::vector<std::pair<std::string, std::string>> settings;
  Position at;
  std::string get(const std::string& key, const std::string& fallback = "") const;
  bool operator==(const ScenarioBlock& o) const;
};

struct Document {
  std::vector<SpaceBlock> spaces;
  std::vector<SystemBlock> systems;
  std::vector<ConservedBlock> conserved;
  std::vector<TransformBlock> transforms;
  std::vector<LaxBlock> laxes;
  std::vector<ScenarioBlock> scenarios;

  bool empty() const;
  bool operator==(const Document& o) const;

  bool has(const std::string& name) const;
  JetSpace space(const std::string& name) const;
  PDESystem system(const std::string& name) const;
  ConservedPair conserved_pair(const std::string& name) const;
  ReciprocalTransform transform(const std::string& name) const;
  // source system of a transform (the system of its conserved block)
  PDESystem transform_source(const std::string& name) const;
  LaxPair lax(const std::string& name) const;
  PDESystem lax_system(const std::string& name) const;

  const SystemBlock& system_block(const std::string& name) const;
  const ConservedBlock& conserved_block(const std::string& name) const;
  const TransformBlock& transform_block(const std::string& name) const;
  const LaxBlock& lax_block(const std::string& name) const;
  const ScenarioBlock& scenario_block(const std::string& name) const;
};

struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string kind;
  std::string message;
  std::string text() const;
};

// throws the first diagnostic (SyntaxError, UnknownName, DuplicateName, ...)
Document parse_document(std::string_view text);
// every diagnostic, recovering at the next top-level block; the document holds the blocks that parsed
std::pair<Document, std::vector<Diagnostic>> parse_with_diagnostics(std::string_view text);

std::string render(const Document& doc);

}  // namespace recipro::dsl
