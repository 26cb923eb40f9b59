#include "mmcurv/expr.hpp"

#include "mmcurv/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace mmcurv {

struct Expression::Node {
  enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Number;
  double value = 0.0;
  int var = -1;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Function {
  const char* name;
  double (*fn)(double);
};

const Function kFunctions[] = {
    {"sin", [](double x) { return std::sin(x); }},
    {"cos", [](double x) { return std::cos(x); }},
    {"tan", [](double x) { return std::tan(x); }},
    {"asin", [](double x) { return std::asin(x); }},
    {"acos", [](double x) { return std::acos(x); }},
    {"atan", [](double x) { return std::atan(x); }},
    {"sinh", [](double x) { return std::sinh(x); }},
    {"cosh", [](double x) { return std::cosh(x); }},
    {"tanh", [](double x) { return std::tanh(x); }},
    {"exp", [](double x) { return std::exp(x); }},
    {"ln", [](double x) { return std::log(x); }},
    {"log", [](double x) { return std::log(x); }},
    {"sqrt", [](double x) { return std::sqrt(x); }},
    {"abs", [](double x) { return std::abs(x); }},
};

NodePtr number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->value = v;
  return n;
}

double eval_node(const Node& n, std::span<const double> vars);

bool constant_subtree(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Number: return true;
    case Node::Kind::Variable: return false;
    case Node::Kind::Neg:
    case Node::Kind::Call: return constant_subtree(*n.lhs);
    default: return constant_subtree(*n.lhs) && constant_subtree(*n.rhs);
  }
}

// Folds constant subtrees so repeated evaluation only touches live nodes.
NodePtr make(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr,
             double (*fn)(double) = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->fn = fn;
  if (constant_subtree(*n)) return number(eval_node(*n, {}));
  return n;
}

double eval_node(const Node& n, std::span<const double> vars) {
  switch (n.kind) {
    case Node::Kind::Number: return n.value;
    case Node::Kind::Variable: return vars[static_cast<std::size_t>(n.var)];
    case Node::Kind::Neg: return -eval_node(*n.lhs, vars);
    case Node::Kind::Add: return eval_node(*n.lhs, vars) + eval_node(*n.rhs, vars);
    case Node::Kind::Sub: return eval_node(*n.lhs, vars) - eval_node(*n.rhs, vars);
    case Node::Kind::Mul: return eval_node(*n.lhs, vars) * eval_node(*n.rhs, vars);
    case Node::Kind::Div: return eval_node(*n.lhs, vars) / eval_node(*n.rhs, vars);
    case Node::Kind::Pow: {
      const double base = eval_node(*n.lhs, vars);
      if (n.rhs->kind == Node::Kind::Number && n.rhs->value == 2.0) {
        return base * base;
      }
      return std::pow(base, eval_node(*n.rhs, vars));
    }
    case Node::Kind::Call: return n.fn(eval_node(*n.lhs, vars));
  }
  return 0.0;
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars,
         const std::map<std::string, double>& constants)
      : text_(text), vars_(vars), constants_(constants) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + std::string(text_) + "': " + what +
                      " at column " + std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Node::Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Node::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Node::Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Node::Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    skip();
    if (accept('^')) return make(Node::Kind::Pow, base, unary());
    if (pos_ + 1 < text_.size() && text_[pos_] == '*' &&
        text_[pos_ + 1] == '*') {
      pos_ += 2;
      return make(Node::Kind::Pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(text_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return number(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      skip();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        for (const auto& f : kFunctions) {
          if (name == f.name) {
            ++pos_;
            NodePtr arg = expr();
            if (!accept(')')) fail("expected ')' after argument of " + name);
            return make(Node::Kind::Call, arg, nullptr, f.fn);
          }
        }
        pos_ = start;
        fail("unknown function '" + name + "'");
      }
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) {
          auto n = std::make_shared<Node>();
          n->kind = Node::Kind::Variable;
          n->var = static_cast<int>(i);
          return n;
        }
      }
      if (auto it = constants_.find(name); it != constants_.end()) {
        return number(it->second);
      }
      if (name == "pi") return number(std::numbers::pi);
      if (name == "e") return number(std::numbers::e);
      pos_ = start;
      fail("unknown name '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  const std::map<std::string, double>& constants_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text,
                             const std::vector<std::string>& variables,
                             const std::map<std::string, double>& constants) {
  Expression e;
  e.source_ = std::string(text);
  Parser p(e.source_, variables, constants);
  e.root_ = p.parse();
  return e;
}

double Expression::eval(std::span<const double> vars) const {
  if (!root_) throw ConfigError("evaluating an empty expression");
  return eval_node(*root_, vars);
}

bool Expression::is_constant() const {
  return root_ && root_->kind == Node::Kind::Number;
}

}  // namespace mmcurv
