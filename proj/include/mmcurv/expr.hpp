#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mmcurv {

/// Compiled arithmetic expression over named variables.
///
/// Grammar (whitespace ignored):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary (('^' | '**') unary)?        right associative
///   primary := number | name | name '(' expr ')' | '(' expr ')'
///
/// Functions: sin cos tan asin acos atan sinh cosh tanh exp ln log sqrt abs.
/// log is the natural logarithm. Built-in constants: pi, e. Variables and
/// caller constants shadow the built-ins. Parse errors throw ConfigError with
/// the column of the offending token.
class Expression {
 public:
  Expression() = default;

  static Expression parse(std::string_view text,
                          const std::vector<std::string>& variables,
                          const std::map<std::string, double>& constants = {});

  /// vars[i] is the value of variables[i] passed to parse().
  double eval(std::span<const double> vars) const;

  bool is_constant() const;
  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace mmcurv
