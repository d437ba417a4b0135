#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "recipro/expression.hpp"

namespace recipro {

struct Token {
  enum class Kind { Ident, Number, Command, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

std::vector<Token> tokenize(std::string_view text);

// Name resolution used by the expression parser.
class ParseScope {
 public:
  virtual ~ParseScope() = default;
  virtual Expression identifier(const std::string& name, const Token& at) const;
  virtual Expression jet(const std::string& field, const std::map<std::string, int>& counts, const Token& at) const;
  virtual bool is_variable(const std::string& name) const;
  virtual Expression total_derivative(const Expression& e, const std::string& var, const Token& at) const;
};

class ExpressionParser {
 public:
  ExpressionParser(const std::vector<Token>& tokens, std::size_t& pos, const ParseScope& scope, std::set<std::string> stop_words = {});
  Expression parse();

 private:
  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_symbol(const char* s) const;
  bool at_command(const char* s) const;
  void expect_symbol(const char* s);
  bool starts_primary() const;
  Expression sum();
  Expression product();
  Expression unary();
  Expression power();
  Expression primary();
  Expression exponent_expr();
  Expression group_close(const char* close);
  std::map<std::string, int> subscript();
  void add_suffix_vars(const std::string& text, std::map<std::string, int>& counts, const Token& at, int mult);
  Expression apply_suffix(Expression base, const Token& at);

  const std::vector<Token>& toks_;
  std::size_t& pos_;
  const ParseScope& scope_;
  std::set<std::string> stop_;
};

Expression parse_expression(std::string_view text, const ParseScope& scope);
Expression parse_expression(std::string_view text);

}  // namespace recipro
