#include "recipro/dsl.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "recipro/error.hpp"
#include "recipro/parse.hpp"

namespace recipro::dsl {

bool EquationItem::operator==(const EquationItem& o) const {
  return label == o.label && definition == o.definition && lhs == o.lhs && rhs == o.rhs;
}
bool SpaceBlock::operator==(const SpaceBlock& o) const {
  return name == o.name && indep == o.indep && dep == o.dep && params == o.params && order == o.order;
}
bool SystemBlock::operator==(const SystemBlock& o) const {
  return name == o.name && space == o.space && equations == o.equations && priority == o.priority && blocks == o.blocks &&
         orderly == o.orderly;
}
bool ConservedBlock::operator==(const ConservedBlock& o) const {
  return name == o.name && system == o.system && a == o.a && x == o.x && a_prime == o.a_prime && x_prime == o.x_prime;
}
bool TransformBlock::operator==(const TransformBlock& o) const {
  return name == o.name && pivot == o.pivot && via == o.via && extra == o.extra && renames == o.renames && aux == o.aux &&
         new_field == o.new_field && target == o.target && vars == o.vars && retained == o.retained;
}
bool LaxBlock::operator==(const LaxBlock& o) const {
  return name == o.name && system == o.system && eigen == o.eigen && spectral == o.spectral && params == o.params &&
         spatial == o.spatial && temporal == o.temporal && constraints == o.constraints && priority == o.priority;
}
bool ScenarioBlock::operator==(const ScenarioBlock& o) const { return name == o.name && settings == o.settings; }

std::string ScenarioBlock::get(const std::string& key, const std::string& fallback) const {
  for (const auto& [k, v] : settings)
    if (k == key) return v;
  return fallback;
}

bool Document::empty() const {
  return spaces.empty() && systems.empty() && conserved.empty() && transforms.empty() && laxes.empty() && scenarios.empty();
}

bool Document::operator==(const Document& o) const {
  return spaces == o.spaces && systems == o.systems && conserved == o.conserved && transforms == o.transforms && laxes == o.laxes &&
         scenarios == o.scenarios;
}

std::string Diagnostic::text() const { return std::to_string(line) + ":" + std::to_string(col) + ": " + kind + ": " + message; }

namespace {

template <class T>
const T* find_named(const std::vector<T>& v, const std::string& name) {
  for (const auto& b : v)
    if (b.name == name) return &b;
  return nullptr;
}

template <class T>
const T& named(const std::vector<T>& v, const std::string& name, const char* what) {
  if (const T* p = find_named(v, name)) return *p;
  throw UnknownName(std::string("no ") + what + " named '" + name + "'");
}

std::vector<Equation> to_equations(const std::vector<EquationItem>& items) {
  std::vector<Equation> out;
  for (const auto& it : items) out.push_back({it.label, it.expr(), it.definition});
  return out;
}

JetSpace lax_space(const JetSpace& base, const LaxBlock& b) {
  std::vector<std::string> f = b.eigen;
  if (!b.spectral.empty()) f.push_back(b.spectral);
  return base.extended(f, b.params);
}

}  // namespace

bool Document::has(const std::string& name) const {
  return find_named(spaces, name) || find_named(systems, name) || find_named(conserved, name) || find_named(transforms, name) ||
         find_named(laxes, name) || find_named(scenarios, name);
}

const SystemBlock& Document::system_block(const std::string& name) const { return named(systems, name, "system"); }
const ConservedBlock& Document::conserved_block(const std::string& name) const { return named(conserved, name, "conserved block"); }
const TransformBlock& Document::transform_block(const std::string& name) const { return named(transforms, name, "transform"); }
const LaxBlock& Document::lax_block(const std::string& name) const { return named(laxes, name, "lax block"); }
const ScenarioBlock& Document::scenario_block(const std::string& name) const { return named(scenarios, name, "scenario"); }

JetSpace Document::space(const std::string& name) const {
  const SpaceBlock& b = named(spaces, name, "space");
  return JetSpace::declare(b.indep, b.dep, b.order, b.params);
}

PDESystem Document::system(const std::string& name) const {
  const SystemBlock& b = system_block(name);
  std::optional<Ranking> r;
  if (!b.priority.empty() || !b.blocks.empty() || b.orderly) {
    Ranking rk;
    rk.priority = b.priority;
    rk.blocks = b.blocks;
    rk.orderly = b.orderly.value_or(true);
    r = rk;
  }
  return PDESystem(b.name, space(b.space), to_equations(b.equations), r);
}

ConservedPair Document::conserved_pair(const std::string& name) const {
  const ConservedBlock& b = conserved_block(name);
  return ConservedPair(b.a, b.x, b.a_prime, b.x_prime);
}

PDESystem Document::transform_source(const std::string& name) const {
  return system(conserved_block(transform_block(name).via).system);
}

ReciprocalTransform Document::transform(const std::string& name) const {
  const TransformBlock& b = transform_block(name);
  PDESystem src = transform_source(name);
  BuildOptions o;
  o.new_field = b.new_field;
  o.target_pivot = b.target;
  o.renames = b.renames;
  o.aux = b.aux;
  o.target_vars = b.vars;
  o.retained = b.retained;
  std::map<std::string, Expression> extra(b.extra.begin(), b.extra.end());
  return build_transform(conserved_pair(b.via), extra, b.pivot, src, o);
}

PDESystem Document::lax_system(const std::string& name) const { return system(lax_block(name).system); }

LaxPair Document::lax(const std::string& name) const {
  const LaxBlock& b = lax_block(name);
  LaxPair lp;
  lp.name = b.name;
  lp.space = lax_space(lax_system(name).space(), b);
  lp.eigen = b.eigen;
  lp.spectral = b.spectral;
  lp.spatial = to_equations(b.spatial);
  lp.temporal = to_equations(b.temporal);
  lp.constraints = to_equations(b.constraints);
  lp.eigen_priority = b.priority;
  return lp;
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Failure {
  int line;
  int col;
  std::string kind;
  std::string message;
};

Failure at_token(const Token& t, const std::string& kind, const std::string& msg) { return {t.line, t.col, kind, msg}; }

class Scope : public ParseScope {
 public:
  explicit Scope(JetSpace s) : s_(std::move(s)) {}

  Expression identifier(const std::string& name, const Token& at) const override {
    if (name == "I") return imaginary_unit();
    if (s_.has_independent(name)) return s_.var(name);
    if (s_.has_field(name)) return s_.field(name);
    if (s_.has_parameter(name)) return s_.param(name);
    throw at_token(at, "UnknownName", "unknown name '" + name + "'");
  }
  Expression jet(const std::string& field, const std::map<std::string, int>& counts, const Token& at) const override {
    if (!s_.has_field(field)) throw at_token(at, "UnknownName", "unknown field '" + field + "'");
    for (const auto& [v, k] : counts)
      if (!s_.has_independent(v)) throw at_token(at, "UnknownName", "unknown variable '" + v + "'");
    return s_.jet(field, counts);
  }
  bool is_variable(const std::string& name) const override { return s_.has_independent(name); }
  Expression total_derivative(const Expression& e, const std::string& var, const Token& at) const override {
    if (!s_.has_independent(var)) throw at_token(at, "UnknownName", "unknown variable '" + var + "'");
    return s_.total_derivative(e, intern_var(var), false);
  }
  const JetSpace& space() const { return s_; }

 private:
  JetSpace s_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  void run() {
    while (peek().kind != Token::Kind::End) {
      std::size_t start = pos_;
      try {
        block();
      } catch (const Failure& f) {
        diags_.push_back({f.line, f.col, f.kind, f.message});
        recover(start);
      }
    }
  }

  Document doc;
  std::vector<Diagnostic> diags_;

 private:
  const Token& peek(std::size_t k = 0) const { return t_[std::min(pos_ + k, t_.size() - 1)]; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < t_.size() - 1) ++pos_;
    return t;
  }
  bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Token::Kind::Symbol && peek(k).text == s; }
  bool is_ident(const char* s) const { return peek().kind == Token::Kind::Ident && peek().text == s; }

  static std::string describe(const Token& t) { return t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'"; }

  void expect(const char* s) {
    if (!is_sym(s)) throw at_token(peek(), "SyntaxError", std::string("expected '") + s + "' but found " + describe(peek()));
    next();
  }

  std::string ident() {
    if (peek().kind != Token::Kind::Ident) throw at_token(peek(), "SyntaxError", "expected a name but found " + describe(peek()));
    return next().text;
  }

  std::vector<std::string> ident_list() {
    std::vector<std::string> v{ident()};
    while (is_sym(",")) {
      next();
      v.push_back(ident());
    }
    return v;
  }

  // tokens glued together up to ':' (labels such as P_Y)
  std::string label() {
    std::string s;
    while (!is_sym(":")) {
      const Token& t = peek();
      if (t.kind == Token::Kind::End || is_sym(";") || is_sym("}") || is_sym("{") || is_sym("="))
        throw at_token(t, "SyntaxError", "expected ':' but found " + describe(t));
      s += next().text;
    }
    return s;
  }

  std::string value_text() {
    std::string s;
    while (!is_sym(";") && !is_sym("}") && peek().kind != Token::Kind::End) s += next().text;
    if (s.empty()) throw at_token(peek(), "SyntaxError", "expected a value but found " + describe(peek()));
    return s;
  }

  void item_end() {
    if (is_sym(";")) {
      next();
      return;
    }
    if (!is_sym("}")) throw at_token(peek(), "SyntaxError", "expected ';' but found " + describe(peek()));
  }

  Expression expr(const Scope& scope, std::set<std::string> stops = {}) {
    const Token& start = peek();
    if (is_sym(";") || is_sym("}") || is_sym("=") || start.kind == Token::Kind::End)
      throw at_token(start, "SyntaxError", "expected an expression but found " + describe(start));
    try {
      ExpressionParser p(t_, pos_, scope, std::move(stops));
      return p.parse();
    } catch (const SyntaxError& e) {
      throw Failure{e.line(), e.column(), "SyntaxError", e.message()};
    } catch (const Failure&) {
      throw;
    } catch (const Error& e) {
      int line = 0, col = 0;
      std::string msg = e.what();
      if (std::sscanf(msg.c_str(), "%d:%d:", &line, &col) == 2) msg = msg.substr(msg.find(": ") + 2);
      else line = start.line, col = start.col;
      throw Failure{line, col, e.kind(), msg};
    }
  }

  EquationItem equation(const Scope& scope, bool definition, int counter, const std::string& prefix) {
    EquationItem it;
    it.at = {peek().line, peek().col};
    it.definition = definition;
    it.label = is_sym(":") ? prefix + std::to_string(counter) : label();
    expect(":");
    it.lhs = expr(scope);
    if (is_sym("=")) {
      next();
      it.rhs = expr(scope);
    }
    if (it.lhs == it.rhs) throw at_token(peek(), "SyntaxError", "equation '" + it.label + "' is an identity");
    return it;
  }

  void recover(std::size_t start) {
    pos_ = start;
    while (peek().kind != Token::Kind::End && !is_sym("{")) next();
    if (peek().kind == Token::Kind::End) return;
    int depth = 0;
    do {
      if (is_sym("{")) ++depth;
      if (is_sym("}")) --depth;
      next();
    } while (depth > 0 && peek().kind != Token::Kind::End);
  }

  std::string block_name(const char* kind, std::size_t count, std::set<std::string> keywords) {
    std::string name;
    if (peek().kind == Token::Kind::Ident && !keywords.count(peek().text)) name = next().text;
    else name = std::string(kind) + std::to_string(count + 1);
    if (doc.has(name)) throw at_token(peek(), "DuplicateName", "duplicate block name '" + name + "'");
    return name;
  }

  void block() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) throw at_token(t, "SyntaxError", "expected a block keyword but found " + describe(t));
    if (t.text == "space") return space_block();
    if (t.text == "system") return system_block();
    if (t.text == "conserved") return conserved_block();
    if (t.text == "transform") return transform_block();
    if (t.text == "lax") return lax_block();
    if (t.text == "scenario") return scenario_block();
    throw at_token(t, "SyntaxError", "unknown block '" + t.text + "'");
  }

  void space_block() {
    SpaceBlock b;
    const Token& kw = next();
    b.at = {kw.line, kw.col};
    b.name = block_name("space", doc.spaces.size(), {});
    expect("{");
    while (!is_sym("}")) {
      const Token& key = peek();
      std::string k = ident();
      expect(":");
      if (k == "indep") b.indep = ident_list();
      else if (k == "dep") b.dep = ident_list();
      else if (k == "param") b.params = ident_list();
      else if (k == "order") {
        const Token& n = next();
        if (n.kind != Token::Kind::Number) throw at_token(n, "SyntaxError", "expected an order but found " + describe(n));
        b.order = std::stoi(n.text);
      } else
        throw at_token(key, "SyntaxError", "unknown space entry '" + k + "'");
      item_end();
    }
    expect("}");
    try {
      JetSpace::declare(b.indep, b.dep, b.order, b.params);
    } catch (const Error& e) {
      throw Failure{b.at.line, b.at.col, e.kind(), e.what()};
    }
    doc.spaces.push_back(std::move(b));
  }

  std::string resolve(const char* keyword, const std::vector<std::string>& known, const char* what) {
    if (is_ident(keyword)) {
      next();
      const Token& n = peek();
      std::string name = ident();
      if (std::find(known.begin(), known.end(), name) == known.end()) throw at_token(n, "UnknownName", std::string("unknown ") + what + " '" + name + "'");
      return name;
    }
    if (known.empty()) throw at_token(peek(), "UnknownName", std::string("no ") + what + " declared before this block");
    return known.back();
  }

  template <class T>
  static std::vector<std::string> names(const std::vector<T>& v) {
    std::vector<std::string> out;
    for (const auto& b : v) out.push_back(b.name);
    return out;
  }

  void check_vars(const JetSpace& s, const std::vector<std::string>& vars, const Token& at) {
    for (const auto& v : vars)
      if (!s.has_independent(v)) throw at_token(at, "UnknownName", "unknown variable '" + v + "'");
  }

  void system_block() {
    SystemBlock b;
    const Token& kw = next();
    b.at = {kw.line, kw.col};
    b.name = block_name("system", doc.systems.size(), {"in"});
    b.space = resolve("in", names(doc.spaces), "space");
    Scope scope(doc.space(b.space));
    expect("{");
    int n = 0;
    while (!is_sym("}")) {
      const Token& key = peek();
      std::string k = ident();
      if (k == "eq" || k == "def") {
        b.equations.push_back(equation(scope, k == "def", ++n, "e"));
      } else if (k == "priority") {
        expect(":");
        b.priority = ident_list();
        check_vars(scope.space(), b.priority, key);
      } else if (k == "blocks") {
        expect(":");
        b.blocks.push_back(ident_list());
        while (is_sym("|")) {
          next();
          b.blocks.push_back(ident_list());
        }
        for (const auto& blk : b.blocks)
          for (const auto& f : blk)
            if (!scope.space().has_field(f)) throw at_token(key, "UnknownName", "unknown field '" + f + "'");
      } else if (k == "orderly") {
        expect(":");
        const Token& v = peek();
        std::string val = ident();
        if (val != "true" && val != "false") throw at_token(v, "SyntaxError", "expected true or false");
        b.orderly = val == "true";
      } else {
        throw at_token(key, "SyntaxError", "unknown system entry '" + k + "'");
      }
      item_end();
    }
    expect("}");
    if (b.equations.empty()) throw Failure{b.at.line, b.at.col, "SyntaxError", "system '" + b.name + "' has no equations"};
    doc.systems.push_back(std::move(b));
  }

  void conserved_block() {
    ConservedBlock b;
    const Token& kw = next();
    b.at = {kw.line, kw.col};
    b.name = block_name("conserved", doc.conserved.size(), {"on"});
    b.system = resolve("on", names(doc.systems), "system");
    Scope scope(doc.space(doc.system_block(b.system).space));
    expect("{");
    bool have_a = false, have_b = false;
    while (!is_sym("}")) {
      const Token& key = peek();
      std::string k = ident();
      expect(":");
      Expression e = expr(scope, {"on"});
      if (!is_ident("on")) throw at_token(peek(), "SyntaxError", "expected 'on' but found " + describe(peek()));
      next();
      const Token& v = peek();
      std::string var = ident();
      check_vars(scope.space(), {var}, v);
      if (k == "A") {
        b.a = e;
        b.x = var;
        have_a = true;
      } else if (k == "B") {
        b.a_prime = e;
        b.x_prime = var;
        have_b = true;
      } else {
        throw at_token(key, "SyntaxError", "expected 'A' or 'B'");
      }
      item_end();
    }
    expect("}");
    if (!have_a || !have_b) throw Failure{b.at.line, b.at.col, "SyntaxError", "conserved block needs both A and B"};
    if (b.x == b.x_prime) throw Failure{b.at.line, b.at.col, "InvalidArgument", "A and B must be taken along different variables"};
    doc.conserved.push_back(std::move(b));
  }

  void transform_block() {
    TransformBlock b;
    const Token& kw = next();
    b.at = {kw.line, kw.col};
    b.name = block_name("transform", doc.transforms.size(), {});
    expect("{");
    std::optional<Scope> scope;
    auto need_scope = [&](const Token& at) -> const Scope& {
      if (!scope) throw at_token(at, "SyntaxError", "'via' must precede expressions in a transform");
      return *scope;
    };
    auto assignments = [&](const Token& at, std::vector<std::pair<std::string, Expression>>& out) {
      const Scope& s = need_scope(at);
      bool first = true;
      do {
        if (!first) next();
        first = false;
        std::string v = ident();
        expect("=");
        out.emplace_back(v, expr(s));
      } while (is_sym(","));
    };
    while (!is_sym("}")) {
      const Token& key = peek();
      std::string k = ident();
      expect(":");
      if (k == "pivot") {
        b.pivot = ident();
      } else if (k == "via") {
        const Token& n = peek();
        b.via = ident();
        if (!find_named(doc.conserved, b.via)) throw at_token(n, "UnknownName", "unknown conserved block '" + b.via + "'");
        scope.emplace(doc.space(doc.system_block(doc.conserved_block(b.via).system).space));
      } else if (k == "extra") {
        assignments(key, b.extra);
        for (const auto& [v, e] : b.extra) check_vars(scope->space(), {v}, key);
      } else if (k == "aux") {
        assignments(key, b.aux);
      } else if (k == "rename") {
        bool first = true;
        do {
          if (!first) next();
          first = false;
          std::string from = ident();
          expect("->");
          b.renames.emplace_back(from, ident());
        } while (is_sym(","));
      } else if (k == "new") {
        b.new_field = ident();
      } else if (k == "target") {
        b.target = ident();
      } else if (k == "vars") {
        b.vars = ident_list();
      } else if (k == "retain") {
        b.retained = ident_list();
      } else {
        throw at_token(key, "SyntaxError", "unknown transform entry '" + k + "'");
      }
      item_end();
    }
    expect("}");
    if (b.via.empty()) throw Failure{b.at.line, b.at.col, "SyntaxError", "transform needs 'via'"};
    if (b.pivot.empty()) throw Failure{b.at.line, b.at.col, "SyntaxError", "transform needs 'pivot'"};
    check_vars(scope->space(), {b.pivot}, kw);
    for (const auto& [from, to] : b.renames) check_vars(scope->space(), {from}, kw);
    doc.transforms.push_back(std::move(b));
  }

  void lax_block() {
    LaxBlock b;
    const Token& kw = next();
    b.at = {kw.line, kw.col};
    b.name = block_name("lax", doc.laxes.size(), {"on"});
    b.system = resolve("on", names(doc.systems), "system");
    JetSpace base = doc.space(doc.system_block(b.system).space);
    expect("{");
    std::optional<Scope> scope;
    int n = 0;
    while (!is_sym("}")) {
      const Token& key = peek();
      std::string k = ident();
      if (k == "spatial" || k == "temporal" || k == "constraint") {
        if (b.eigen.empty()) throw at_token(key, "SyntaxError", "'eigen' must precede the equations of a lax block");
        if (!scope) {
          try {
            scope.emplace(lax_space(base, b));
          } catch (const Error& e) {
            throw at_token(key, e.kind(), e.what());
          }
        }
        auto& list = k == "spatial" ? b.spatial : k == "temporal" ? b.temporal : b.constraints;
        list.push_back(equation(*scope, false, ++n, k.substr(0, 1)));
      } else {
        expect(":");
        if (scope) throw at_token(key, "SyntaxError", "'" + k + "' must precede the equations of a lax block");
        if (k == "eigen") b.eigen = ident_list();
        else if (k == "spectral") b.spectral = ident();
        else if (k == "param") b.params = ident_list();
        else if (k == "priority") {
          b.priority = ident_list();
          check_vars(base, b.priority, key);
        } else
          throw at_token(key, "SyntaxError", "unknown lax entry '" + k + "'");
      }
      item_end();
    }
    expect("}");
    if (b.spatial.empty() || b.temporal.empty()) throw Failure{b.at.line, b.at.col, "SyntaxError", "lax block needs spatial and temporal equations"};
    doc.laxes.push_back(std::move(b));
  }

  void scenario_block() {
    ScenarioBlock b;
    const Token& kw = next();
    b.at = {kw.line, kw.col};
    b.name = block_name("scenario", doc.scenarios.size(), {});
    expect("{");
    while (!is_sym("}")) {
      std::string k = ident();
      expect(":");
      b.settings.emplace_back(k, value_text());
      item_end();
    }
    expect("}");
    if (b.get("command").empty()) throw Failure{b.at.line, b.at.col, "SyntaxError", "scenario needs a 'command' entry"};
    doc.scenarios.push_back(std::move(b));
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

}  // namespace

std::pair<Document, std::vector<Diagnostic>> parse_with_diagnostics(std::string_view text) {
  std::vector<Token> toks;
  try {
    toks = tokenize(text);
  } catch (const SyntaxError& e) {
    return {Document{}, {{e.line(), e.column(), "SyntaxError", e.message()}}};
  }
  Parser p(std::move(toks));
  p.run();
  return {std::move(p.doc), std::move(p.diags_)};
}

Document parse_document(std::string_view text) {
  auto [doc, diags] = parse_with_diagnostics(text);
  if (diags.empty()) return doc;
  const Diagnostic& d = diags.front();
  if (d.kind == "SyntaxError") throw SyntaxError(d.line, d.col, d.message);
  std::string msg = std::to_string(d.line) + ":" + std::to_string(d.col) + ": " + d.message;
  if (d.kind == "UnknownName") throw UnknownName(msg);
  if (d.kind == "DuplicateName") throw DuplicateName(msg);
  throw InvalidArgument(msg);
}

// ---------------------------------------------------------------------------
// rendering

namespace {

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string eq_text(const EquationItem& e) {
  std::string s = e.label + ": " + to_text(e.lhs);
  if (!e.rhs.is_zero()) s += " = " + to_text(e.rhs);
  return s;
}

}  // namespace

std::string render(const Document& doc) {
  std::string out;
  for (const auto& b : doc.spaces) {
    out += "space " + b.name + " {\n  indep: " + join(b.indep) + ";\n  dep: " + join(b.dep) + ";\n";
    if (!b.params.empty()) out += "  param: " + join(b.params) + ";\n";
    out += "  order: " + std::to_string(b.order) + "\n}\n\n";
  }
  for (const auto& b : doc.systems) {
    out += "system " + b.name + " in " + b.space + " {\n";
    for (const auto& e : b.equations) out += std::string("  ") + (e.definition ? "def " : "eq ") + eq_text(e) + ";\n";
    if (!b.priority.empty()) out += "  priority: " + join(b.priority) + ";\n";
    if (!b.blocks.empty()) {
      std::vector<std::string> parts;
      for (const auto& blk : b.blocks) parts.push_back(join(blk));
      out += "  blocks: " + join(parts, " | ") + ";\n";
    }
    if (b.orderly) out += std::string("  orderly: ") + (*b.orderly ? "true" : "false") + ";\n";
    out += "}\n\n";
  }
  for (const auto& b : doc.conserved)
    out += "conserved " + b.name + " on " + b.system + " {\n  A: " + to_text(b.a) + " on " + b.x + ";\n  B: " + to_text(b.a_prime) + " on " +
           b.x_prime + "\n}\n\n";
  for (const auto& b : doc.transforms) {
    out += "transform " + b.name + " {\n  via: " + b.via + ";\n  pivot: " + b.pivot + ";\n";
    auto assigns = [](const std::vector<std::pair<std::string, Expression>>& v) {
      std::vector<std::string> parts;
      for (const auto& [k, e] : v) parts.push_back(k + " = " + to_text(e));
      return join(parts);
    };
    if (!b.extra.empty()) out += "  extra: " + assigns(b.extra) + ";\n";
    if (!b.renames.empty()) {
      std::vector<std::string> parts;
      for (const auto& [a, c] : b.renames) parts.push_back(a + " -> " + c);
      out += "  rename: " + join(parts) + ";\n";
    }
    if (!b.aux.empty()) out += "  aux: " + assigns(b.aux) + ";\n";
    out += "  new: " + b.new_field + ";\n  target: " + b.target + ";\n";
    if (!b.vars.empty()) out += "  vars: " + join(b.vars) + ";\n";
    if (!b.retained.empty()) out += "  retain: " + join(b.retained) + ";\n";
    out += "}\n\n";
  }
  for (const auto& b : doc.laxes) {
    out += "lax " + b.name + " on " + b.system + " {\n  eigen: " + join(b.eigen) + ";\n";
    if (!b.spectral.empty()) out += "  spectral: " + b.spectral + ";\n";
    if (!b.params.empty()) out += "  param: " + join(b.params) + ";\n";
    if (!b.priority.empty()) out += "  priority: " + join(b.priority) + ";\n";
    for (const auto& e : b.spatial) out += "  spatial " + eq_text(e) + ";\n";
    for (const auto& e : b.temporal) out += "  temporal " + eq_text(e) + ";\n";
    for (const auto& e : b.constraints) out += "  constraint " + eq_text(e) + ";\n";
    out += "}\n\n";
  }
  for (const auto& b : doc.scenarios) {
    out += "scenario " + b.name + " {\n";
    for (const auto& [k, v] : b.settings) out += "  " + k + ": " + v + ";\n";
    out += "}\n\n";
  }
  return out;
}

}  // namespace recipro::dsl
