#include "recipro/parse.hpp"

#include <cctype>

#include "recipro/error.hpp"

namespace recipro {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Kind::Number;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '\\') {
      std::size_t j = i + 1;
      while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i + 1) {
        // \, \; \! and similar spacing commands
        advance(2);
        continue;
      }
      t.kind = Token::Kind::Command;
      t.text = std::string(text.substr(i + 1, j - i - 1));
      advance(j - i);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      t.kind = Token::Kind::Symbol;
      t.text = "->";
      advance(2);
    } else if (std::string_view("+-*/^_(){}[],=;:<>|.").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::Symbol;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

Expression ParseScope::identifier(const std::string& name, const Token&) const {
  if (name == "I") return imaginary_unit();
  return Expression::atom(jet_atom(name));
}

Expression ParseScope::jet(const std::string& field, const std::map<std::string, int>& counts, const Token&) const {
  MultiIndex m;
  for (const auto& [v, k] : counts) m = m.plus(intern_var(v), k);
  return Expression::atom(jet_atom(field, m));
}

bool ParseScope::is_variable(const std::string& name) const {
  if (name.size() == 1) return true;
  for (char c : name)
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
  return false;
}

Expression ParseScope::total_derivative(const Expression&, const std::string&, const Token& at) const {
  throw SyntaxError(at.line, at.col, "total derivative needs a declared space");
}

ExpressionParser::ExpressionParser(const std::vector<Token>& tokens, std::size_t& pos, const ParseScope& scope,
                                   std::set<std::string> stop_words)
    : toks_(tokens), pos_(pos), scope_(scope), stop_(std::move(stop_words)) {}

const Token& ExpressionParser::peek(std::size_t ahead) const {
  std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
  return toks_[k];
}

const Token& ExpressionParser::next() {
  const Token& t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

bool ExpressionParser::at_symbol(const char* s) const {
  return peek().kind == Token::Kind::Symbol && peek().text == s;
}

bool ExpressionParser::at_command(const char* s) const {
  return peek().kind == Token::Kind::Command && peek().text == s;
}

void ExpressionParser::expect_symbol(const char* s) {
  if (!at_symbol(s)) {
    const Token& t = peek();
    std::string got = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.line, t.col, std::string("expected '") + s + "' but found " + got);
  }
  next();
}

Expression ExpressionParser::parse() {
  if (peek().kind == Token::Kind::End) throw SyntaxError(peek().line, peek().col, "empty expression");
  return sum();
}

Expression ExpressionParser::sum() {
  Expression acc = product();
  for (;;) {
    if (at_symbol("+")) {
      next();
      acc = acc + product();
    } else if (at_symbol("-")) {
      next();
      acc = acc - product();
    } else {
      return acc;
    }
  }
}

bool ExpressionParser::starts_primary() const {
  const Token& t = peek();
  switch (t.kind) {
    case Token::Kind::Ident:
      return stop_.count(t.text) == 0;
    case Token::Kind::Number:
      return true;
    case Token::Kind::Command:
      return t.text != "right" && t.text != "cdot" && t.text != "times";
    case Token::Kind::Symbol:
      return t.text == "(" || t.text == "{";
    default:
      return false;
  }
}

Expression ExpressionParser::product() {
  Expression acc = unary();
  for (;;) {
    if (at_symbol("*") || at_command("cdot") || at_command("times")) {
      next();
      acc = acc * unary();
    } else if (at_symbol("/")) {
      const Token& at = next();
      Expression d = unary();
      if (d.is_zero()) throw SyntaxError(at.line, at.col, "division by zero");
      acc = acc / d;
    } else if (starts_primary()) {
      acc = acc * power();
    } else {
      return acc;
    }
  }
}

Expression ExpressionParser::unary() {
  if (at_symbol("-")) {
    next();
    return -unary();
  }
  if (at_symbol("+")) {
    next();
    return unary();
  }
  return power();
}

Expression ExpressionParser::exponent_expr() {
  if (at_symbol("{")) {
    next();
    Expression e = sum();
    expect_symbol("}");
    return e;
  }
  if (at_symbol("(")) {
    next();
    Expression e = sum();
    expect_symbol(")");
    return e;
  }
  if (at_symbol("-")) {
    next();
    return -exponent_expr();
  }
  const Token& t = peek();
  if (t.kind == Token::Kind::Number) {
    next();
    return Expression(Rational(t.text));
  }
  if (t.kind == Token::Kind::Ident || t.kind == Token::Kind::Command) {
    next();
    return scope_.identifier(t.text, t);
  }
  throw SyntaxError(t.line, t.col, "malformed exponent");
}

Expression ExpressionParser::power() {
  Expression base = primary();
  while (at_symbol("^")) {
    const Token& at = next();
    Expression e = exponent_expr();
    if (!e.is_constant()) {
      if (!base.is_atom()) throw SyntaxError(at.line, at.col, "symbolic exponent needs a single-atom base");
      base = power_of(base.as_atom(), e);
      continue;
    }
    Rational q = e.constant_value();
    if (q.get_den() == 1) {
      if (!q.get_num().fits_sint_p()) throw SyntaxError(at.line, at.col, "exponent too large");
      int k = static_cast<int>(q.get_num().get_si());
      if (k < 0 && base.is_zero()) throw SyntaxError(at.line, at.col, "division by zero");
      base = pow(base, k);
    } else {
      if (!base.is_atom()) throw SyntaxError(at.line, at.col, "fractional exponent needs a single-atom base");
      base = power_of(base.as_atom(), e);
    }
  }
  return base;
}

Expression ExpressionParser::group_close(const char* close) {
  Expression e = sum();
  if (std::string(close) == "right") {
    if (!at_command("right")) throw SyntaxError(peek().line, peek().col, "expected \\right)");
    next();
    expect_symbol(")");
  } else {
    expect_symbol(close);
  }
  return e;
}

void ExpressionParser::add_suffix_vars(const std::string& text, std::map<std::string, int>& counts, const Token& at, int mult) {
  if (scope_.is_variable(text)) {
    counts[text] += mult;
    return;
  }
  for (char c : text) {
    std::string v(1, c);
    if (!scope_.is_variable(v)) throw UnknownName(std::to_string(at.line) + ":" + std::to_string(at.col) + ": unknown variable '" + text + "' in derivative suffix");
    counts[v] += mult;
  }
}

std::map<std::string, int> ExpressionParser::subscript() {
  std::map<std::string, int> counts;
  const Token& t = next();
  if (t.kind == Token::Kind::Ident) {
    add_suffix_vars(t.text, counts, t, 1);
    return counts;
  }
  if (!(t.kind == Token::Kind::Symbol && t.text == "{")) throw SyntaxError(t.line, t.col, "malformed derivative suffix");
  while (!at_symbol("}")) {
    const Token& v = next();
    if (v.kind != Token::Kind::Ident) throw SyntaxError(v.line, v.col, "expected a variable in derivative suffix");
    int mult = 1;
    if (at_symbol("^")) {
      next();
      bool braced = at_symbol("{");
      if (braced) next();
      const Token& n = next();
      if (n.kind != Token::Kind::Number) throw SyntaxError(n.line, n.col, "expected a derivative count");
      mult = std::stoi(n.text);
      if (braced) expect_symbol("}");
    }
    add_suffix_vars(v.text, counts, v, mult);
    if (at_symbol(",")) next();
    if (peek().kind == Token::Kind::End) throw SyntaxError(peek().line, peek().col, "unterminated derivative suffix");
  }
  next();
  return counts;
}

Expression ExpressionParser::apply_suffix(Expression base, const Token& at) {
  if (!at_symbol("_")) return base;
  next();
  for (const auto& [v, k] : subscript())
    for (int i = 0; i < k; ++i) base = scope_.total_derivative(base, v, at);
  return base;
}

Expression ExpressionParser::primary() {
  const Token& t = next();
  switch (t.kind) {
    case Token::Kind::Number:
      return Expression(Rational(t.text));
    case Token::Kind::Symbol:
      if (t.text == "(") return apply_suffix(group_close(")"), t);
      if (t.text == "{") return apply_suffix(group_close("}"), t);
      break;
    case Token::Kind::Command: {
      if (t.text == "left") {
        expect_symbol("(");
        return apply_suffix(group_close("right"), t);
      }
      if (t.text == "frac") {
        expect_symbol("{");
        Expression n = sum();
        expect_symbol("}");
        expect_symbol("{");
        Expression d = sum();
        expect_symbol("}");
        if (d.is_zero()) throw SyntaxError(t.line, t.col, "division by zero");
        return n / d;
      }
      if (t.text == "sqrt") {
        expect_symbol("{");
        Expression a = sum();
        expect_symbol("}");
        if (!a.is_atom()) throw SyntaxError(t.line, t.col, "square root needs a single-atom argument");
        return sqrt_of(a.as_atom());
      }
      [[fallthrough]];
    }
    case Token::Kind::Ident: {
      const std::string& name = t.text;
      if (t.kind == Token::Kind::Ident && at_symbol("(") && (name == "sqrt" || name == "pow" || name == "D")) {
        next();
        Expression a = sum();
        if (name == "sqrt") {
          expect_symbol(")");
          if (!a.is_atom()) throw SyntaxError(t.line, t.col, "square root needs a single-atom argument");
          return sqrt_of(a.as_atom());
        }
        expect_symbol(",");
        if (name == "pow") {
          Expression e = sum();
          expect_symbol(")");
          if (!a.is_atom()) throw SyntaxError(t.line, t.col, "pow needs a single-atom base");
          return power_of(a.as_atom(), e);
        }
        const Token& v = next();
        if (v.kind != Token::Kind::Ident) throw SyntaxError(v.line, v.col, "expected a variable name");
        expect_symbol(")");
        return scope_.total_derivative(a, v.text, v);
      }
      if (at_symbol("_")) {
        next();
        return scope_.jet(name, subscript(), t);
      }
      return scope_.identifier(name, t);
    }
    case Token::Kind::End:
      break;
  }
  // an operand is missing: point at the operator left dangling
  if (pos_ >= 2) {
    const Token& op = toks_[pos_ - 2];
    if (op.kind == Token::Kind::Symbol && std::string_view("+-*/^").find(op.text) != std::string_view::npos && op.text.size() == 1)
      throw SyntaxError(op.line, op.col, "dangling operator '" + op.text + "'");
  }
  if (t.kind == Token::Kind::End) throw SyntaxError(t.line, t.col, "unexpected end of input");
  throw SyntaxError(t.line, t.col, "unexpected '" + t.text + "'");
}

Expression parse_expression(std::string_view text, const ParseScope& scope) {
  auto toks = tokenize(text);
  std::size_t pos = 0;
  ExpressionParser p(toks, pos, scope);
  Expression e = p.parse();
  if (toks[pos].kind != Token::Kind::End)
    throw SyntaxError(toks[pos].line, toks[pos].col, "unexpected '" + toks[pos].text + "'");
  return e;
}

Expression parse_expression(std::string_view text) {
  static const ParseScope permissive;
  return parse_expression(text, permissive);
}

}  // namespace recipro
