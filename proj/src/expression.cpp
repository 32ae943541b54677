#include "relcont/expression.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>

namespace relcont {

namespace {

std::string spanned(const std::string& msg, std::size_t line, std::size_t col) {
  return std::to_string(line) + ":" + std::to_string(col) + ": " + msg;
}

}  // namespace

ExprError::ExprError(const std::string& msg, std::size_t line, std::size_t column)
    : std::runtime_error(spanned(msg, line, column)), line(line), column(column) {}

enum class ExprKind { number, variable, neg, add, sub, mul, div, pow, call };

struct ExprNode {
  ExprKind kind = ExprKind::number;
  double value = 0.0;
  std::string name;  // variable or function
  std::vector<std::shared_ptr<const ExprNode>> args;
  std::size_t line = 1, column = 1;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::number;
  n->value = v;
  return n;
}

NodePtr make_node(ExprKind k, std::vector<NodePtr> args, std::size_t line = 1,
                  std::size_t col = 1) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->args = std::move(args);
  n->line = line;
  n->column = col;
  return n;
}

bool is_number(const NodePtr& n, double v) {
  return n->kind == ExprKind::number && n->value == v;
}

// constructors with light constant folding, used by the parser and by
// derivative() so the derivative trees stay readable
NodePtr make_neg(NodePtr a) {
  if (a->kind == ExprKind::number) return make_number(-a->value);
  if (a->kind == ExprKind::neg) return a->args[0];
  return make_node(ExprKind::neg, {a}, a->line, a->column);
}

NodePtr make_add(NodePtr a, NodePtr b) {
  if (a->kind == ExprKind::number && b->kind == ExprKind::number)
    return make_number(a->value + b->value);
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  return make_node(ExprKind::add, {a, b}, a->line, a->column);
}

NodePtr make_sub(NodePtr a, NodePtr b) {
  if (a->kind == ExprKind::number && b->kind == ExprKind::number)
    return make_number(a->value - b->value);
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return make_neg(b);
  return make_node(ExprKind::sub, {a, b}, a->line, a->column);
}

NodePtr make_mul(NodePtr a, NodePtr b) {
  if (a->kind == ExprKind::number && b->kind == ExprKind::number)
    return make_number(a->value * b->value);
  if (is_number(a, 0.0) || is_number(b, 0.0)) return make_number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  return make_node(ExprKind::mul, {a, b}, a->line, a->column);
}

NodePtr make_div(NodePtr a, NodePtr b, std::size_t line = 1, std::size_t col = 1) {
  if (is_number(a, 0.0)) return make_number(0.0);
  if (is_number(b, 1.0)) return a;
  return make_node(ExprKind::div, {a, b}, line, col);
}

NodePtr make_pow(NodePtr a, NodePtr b, std::size_t line = 1, std::size_t col = 1) {
  if (is_number(b, 1.0)) return a;
  if (is_number(b, 0.0)) return make_number(1.0);
  return make_node(ExprKind::pow, {a, b}, line, col);
}

NodePtr make_call(const std::string& fn, std::vector<NodePtr> args,
                  std::size_t line = 1, std::size_t col = 1) {
  auto n = make_node(ExprKind::call, std::move(args), line, col);
  const_cast<ExprNode*>(n.get())->name = fn;
  return n;
}

struct FunctionInfo {
  const char* name;
  std::size_t arity;
};

const FunctionInfo known_functions[] = {
    {"sin", 1}, {"cos", 1}, {"exp", 1}, {"log", 1},  {"sqrt", 1},
    {"tanh", 1}, {"abs", 1}, {"min", 2}, {"max", 2},
};

const FunctionInfo* find_function(const std::string& name) {
  for (std::size_t i = 0; i < sizeof(known_functions) / sizeof(known_functions[0]); ++i)
    if (name == known_functions[i].name) return &known_functions[i];
  return nullptr;
}

struct Token {
  enum Type { number, ident, op, lparen, rparen, comma, end } type = end;
  double value = 0.0;
  std::string text;
  char sym = 0;
  std::size_t line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= text_.size()) {
      tok_.type = Token::end;
      return;
    }
    char c = text_[pos_];
    if ((c >= '0' && c <= '9') || c == '.') {
      const char* start = text_.c_str() + pos_;
      char* stop = nullptr;
      double v = std::strtod(start, &stop);
      if (stop == start) throw ExprError("bad number", line_, col_);
      std::size_t len = std::size_t(stop - start);
      tok_.type = Token::number;
      tok_.value = v;
      pos_ += len;
      col_ += len;
      return;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             ((text_[pos_] >= 'a' && text_[pos_] <= 'z') ||
              (text_[pos_] >= 'A' && text_[pos_] <= 'Z') ||
              (text_[pos_] >= '0' && text_[pos_] <= '9') || text_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      tok_.type = Token::ident;
      tok_.text = text_.substr(start, pos_ - start);
      return;
    }
    ++pos_;
    ++col_;
    switch (c) {
      case '(': tok_.type = Token::lparen; return;
      case ')': tok_.type = Token::rparen; return;
      case ',': tok_.type = Token::comma; return;
      case '+': case '-': case '*': case '/': case '^':
        tok_.type = Token::op;
        tok_.sym = c;
        return;
      default:
        throw ExprError(std::string("unexpected character '") + c + "'", tok_.line,
                        tok_.column);
    }
  }

  std::string text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  Token tok_;
};

// grammar:
//   sum    := product (('+'|'-') product)*
//   product:= unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ['^' unary]            (right-assoc, tighter than unary -)
//   atom   := number | ident | ident '(' sum (',' sum)* ')' | '(' sum ')'
class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  NodePtr parse() {
    NodePtr n = parse_sum();
    const Token& t = lex_.peek();
    if (t.type != Token::end)
      throw ExprError("unexpected trailing input", t.line, t.column);
    return n;
  }

 private:
  NodePtr parse_sum() {
    NodePtr left = parse_product();
    while (lex_.peek().type == Token::op &&
           (lex_.peek().sym == '+' || lex_.peek().sym == '-')) {
      Token op = lex_.take();
      NodePtr right = parse_product();
      left = op.sym == '+' ? with_span(make_add(left, right), op)
                           : with_span(make_sub(left, right), op);
    }
    return left;
  }

  NodePtr parse_product() {
    NodePtr left = parse_unary();
    while (lex_.peek().type == Token::op &&
           (lex_.peek().sym == '*' || lex_.peek().sym == '/')) {
      Token op = lex_.take();
      NodePtr right = parse_unary();
      left = op.sym == '*' ? with_span(make_mul(left, right), op)
                           : make_div(left, right, op.line, op.column);
    }
    return left;
  }

  NodePtr parse_unary() {
    if (lex_.peek().type == Token::op && lex_.peek().sym == '-') {
      Token op = lex_.take();
      return with_span(make_neg(parse_unary()), op);
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (lex_.peek().type == Token::op && lex_.peek().sym == '^') {
      Token op = lex_.take();
      NodePtr expo = parse_unary();
      return make_pow(base, expo, op.line, op.column);
    }
    return base;
  }

  NodePtr parse_atom() {
    Token t = lex_.take();
    if (t.type == Token::number) {
      NodePtr n = make_number(t.value);
      return with_span(n, t);
    }
    if (t.type == Token::ident) {
      if (lex_.peek().type == Token::lparen) {
        const FunctionInfo* fn = find_function(t.text);
        if (!fn)
          throw ExprError("unknown function '" + t.text + "'", t.line, t.column);
        lex_.take();
        std::vector<NodePtr> args;
        args.push_back(parse_sum());
        while (lex_.peek().type == Token::comma) {
          lex_.take();
          args.push_back(parse_sum());
        }
        Token close = lex_.take();
        if (close.type != Token::rparen)
          throw ExprError("expected ')'", close.line, close.column);
        if (args.size() != fn->arity)
          throw ExprError("function '" + t.text + "' takes " +
                              std::to_string(fn->arity) + " argument(s)",
                          t.line, t.column);
        return make_call(t.text, std::move(args), t.line, t.column);
      }
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::variable;
      n->name = t.text;
      n->line = t.line;
      n->column = t.column;
      return n;
    }
    if (t.type == Token::lparen) {
      NodePtr inner = parse_sum();
      Token close = lex_.take();
      if (close.type != Token::rparen)
        throw ExprError("expected ')'", close.line, close.column);
      return inner;
    }
    throw ExprError("expected a value", t.line, t.column);
  }

  static NodePtr with_span(NodePtr n, const Token& t) {
    // folding may return a shared subnode; only stamp fresh nodes
    if (n.use_count() == 1) {
      const_cast<ExprNode*>(n.get())->line = t.line;
      const_cast<ExprNode*>(n.get())->column = t.column;
    }
    return n;
  }

  Lexer lex_;
};

double eval_node(const ExprNode& n,
                 const std::function<const double*(const std::string&)>& lookup);

double eval_call(const ExprNode& n, double a, double b) {
  if (n.name == "sin") return std::sin(a);
  if (n.name == "cos") return std::cos(a);
  if (n.name == "exp") return std::exp(a);
  if (n.name == "tanh") return std::tanh(a);
  if (n.name == "abs") return std::fabs(a);
  if (n.name == "log") {
    if (a <= 0.0) throw ExprError("log of a non-positive value", n.line, n.column);
    return std::log(a);
  }
  if (n.name == "sqrt") {
    if (a < 0.0) throw ExprError("sqrt of a negative value", n.line, n.column);
    return std::sqrt(a);
  }
  if (n.name == "min") return a < b ? a : b;
  if (n.name == "max") return a > b ? a : b;
  throw ExprError("unknown function '" + n.name + "'", n.line, n.column);
}

double eval_node(const ExprNode& n,
                 const std::function<const double*(const std::string&)>& lookup) {
  switch (n.kind) {
    case ExprKind::number: return n.value;
    case ExprKind::variable: {
      const double* v = lookup(n.name);
      if (!v) throw ExprError("unknown identifier '" + n.name + "'", n.line, n.column);
      return *v;
    }
    case ExprKind::neg: return -eval_node(*n.args[0], lookup);
    case ExprKind::add:
      return eval_node(*n.args[0], lookup) + eval_node(*n.args[1], lookup);
    case ExprKind::sub:
      return eval_node(*n.args[0], lookup) - eval_node(*n.args[1], lookup);
    case ExprKind::mul:
      return eval_node(*n.args[0], lookup) * eval_node(*n.args[1], lookup);
    case ExprKind::div: {
      double denom = eval_node(*n.args[1], lookup);
      if (denom == 0.0) throw ExprError("division by zero", n.line, n.column);
      return eval_node(*n.args[0], lookup) / denom;
    }
    case ExprKind::pow: {
      double r = std::pow(eval_node(*n.args[0], lookup), eval_node(*n.args[1], lookup));
      if (std::isnan(r)) throw ExprError("power out of domain", n.line, n.column);
      return r;
    }
    case ExprKind::call: {
      double a = eval_node(*n.args[0], lookup);
      double b = n.args.size() > 1 ? eval_node(*n.args[1], lookup) : 0.0;
      return eval_call(n, a, b);
    }
  }
  throw ExprError("corrupt expression", n.line, n.column);
}

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::add:
    case ExprKind::sub: return 1;
    case ExprKind::mul:
    case ExprKind::div: return 2;
    case ExprKind::neg: return 3;
    case ExprKind::pow: return 4;
    default: return 5;
  }
}

void print_node(const ExprNode& n, std::string& out, int parent_prec) {
  int prec = precedence(n.kind);
  bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (n.kind) {
    case ExprKind::number: {
      char buf[40];
      if (n.value < 0) {
        std::snprintf(buf, sizeof buf, "(%.17g)", n.value);
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
      }
      out += buf;
      break;
    }
    case ExprKind::variable: out += n.name; break;
    case ExprKind::neg:
      out += '-';
      print_node(*n.args[0], out, prec);
      break;
    case ExprKind::add:
      print_node(*n.args[0], out, prec);
      out += " + ";
      print_node(*n.args[1], out, prec);
      break;
    case ExprKind::sub:
      print_node(*n.args[0], out, prec);
      out += " - ";
      print_node(*n.args[1], out, prec + 1);  // a - (b + c)
      break;
    case ExprKind::mul:
      print_node(*n.args[0], out, prec);
      out += "*";
      print_node(*n.args[1], out, prec);
      break;
    case ExprKind::div:
      print_node(*n.args[0], out, prec);
      out += "/";
      print_node(*n.args[1], out, prec + 1);  // a/(b*c)
      break;
    case ExprKind::pow:
      print_node(*n.args[0], out, prec + 1);  // (a^b)^c
      out += "^";
      print_node(*n.args[1], out, prec);
      break;
    case ExprKind::call:
      out += n.name;
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print_node(*n.args[i], out, 0);
      }
      out += ')';
      break;
  }
  if (parens) out += ')';
}

NodePtr diff_node(const NodePtr& n, const std::string& var);

NodePtr diff_call(const ExprNode& n, const std::string& var) {
  NodePtr u = n.args[0];
  NodePtr du = diff_node(u, var);
  if (n.name == "sin") return make_mul(make_call("cos", {u}), du);
  if (n.name == "cos") return make_neg(make_mul(make_call("sin", {u}), du));
  if (n.name == "exp") return make_mul(make_call("exp", {u}), du);
  if (n.name == "log") return make_div(du, u);
  if (n.name == "sqrt")
    return make_div(du, make_mul(make_number(2.0), make_call("sqrt", {u})));
  if (n.name == "tanh") {
    NodePtr t = make_call("tanh", {u});
    return make_mul(make_sub(make_number(1.0), make_mul(t, t)), du);
  }
  if (n.name == "abs") return make_mul(make_div(u, make_call("abs", {u})), du);
  throw ExprError("function '" + n.name + "' is not differentiable here", n.line,
                  n.column);
}

NodePtr diff_node(const NodePtr& n, const std::string& var) {
  switch (n->kind) {
    case ExprKind::number: return make_number(0.0);
    case ExprKind::variable: return make_number(n->name == var ? 1.0 : 0.0);
    case ExprKind::neg: return make_neg(diff_node(n->args[0], var));
    case ExprKind::add:
      return make_add(diff_node(n->args[0], var), diff_node(n->args[1], var));
    case ExprKind::sub:
      return make_sub(diff_node(n->args[0], var), diff_node(n->args[1], var));
    case ExprKind::mul:
      return make_add(make_mul(diff_node(n->args[0], var), n->args[1]),
                      make_mul(n->args[0], diff_node(n->args[1], var)));
    case ExprKind::div: {
      NodePtr u = n->args[0], v = n->args[1];
      NodePtr num = make_sub(make_mul(diff_node(u, var), v),
                             make_mul(u, diff_node(v, var)));
      return make_div(num, make_mul(v, v));
    }
    case ExprKind::pow: {
      NodePtr u = n->args[0], v = n->args[1];
      NodePtr du = diff_node(u, var);
      if (v->kind == ExprKind::number) {
        NodePtr scaled =
            make_mul(v, make_pow(u, make_number(v->value - 1.0)));
        return make_mul(scaled, du);
      }
      // u^v * (v' log u + v u'/u)
      NodePtr dv = diff_node(v, var);
      NodePtr t1 = make_mul(dv, make_call("log", {u}));
      NodePtr t2 = make_mul(v, make_div(du, u));
      return make_mul(make_pow(u, v), make_add(t1, t2));
    }
    case ExprKind::call: return diff_call(*n, var);
  }
  throw ExprError("corrupt expression", n->line, n->column);
}

void collect_variables(const ExprNode& n, std::set<std::string>& out) {
  if (n.kind == ExprKind::variable) out.insert(n.name);
  for (std::size_t i = 0; i < n.args.size(); ++i) collect_variables(*n.args[i], out);
}

const ExprNode* find_disallowed(const ExprNode& n,
                                const std::set<std::string>& allowed) {
  if (n.kind == ExprKind::variable && allowed.find(n.name) == allowed.end())
    return &n;
  for (std::size_t i = 0; i < n.args.size(); ++i)
    if (const ExprNode* bad = find_disallowed(*n.args[i], allowed)) return bad;
  return nullptr;
}

}  // namespace

Expression::Expression() : root_(make_number(0.0)) {}

Expression::Expression(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {
  if (!root_) root_ = make_number(0.0);
}

Expression Expression::constant(double v) { return Expression(make_number(v)); }

Expression Expression::variable(const std::string& name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::variable;
  n->name = name;
  return Expression(n);
}

double Expression::eval(const std::map<std::string, double>& env) const {
  return eval_node(*root_, [&env](const std::string& name) -> const double* {
    auto it = env.find(name);
    return it == env.end() ? nullptr : &it->second;
  });
}

Expression Expression::derivative(const std::string& var) const {
  return Expression(diff_node(root_, var));
}

std::string Expression::print() const {
  std::string out;
  print_node(*root_, out, 0);
  return out;
}

std::set<std::string> Expression::variables() const {
  std::set<std::string> out;
  collect_variables(*root_, out);
  return out;
}

void Expression::check_variables(const std::set<std::string>& allowed) const {
  if (const ExprNode* bad = find_disallowed(*root_, allowed))
    throw ExprError("unknown identifier '" + bad->name + "'", bad->line, bad->column);
}

bool Expression::is_constant() const { return variables().empty(); }

Expression parse_expression(const std::string& text) {
  Parser p(text);
  return Expression(p.parse());
}

Expression parse_expression(const std::string& text,
                            const std::set<std::string>& allowed_vars) {
  Expression e = parse_expression(text);
  e.check_variables(allowed_vars);
  return e;
}

BoundExpression::BoundExpression(const Expression& e,
                                 const std::vector<std::string>& names)
    : root_(e.root()), names_(names) {
  std::set<std::string> allowed(names.begin(), names.end());
  e.check_variables(allowed);
}

double BoundExpression::eval(const double* values) const {
  return eval_node(*root_, [this, values](const std::string& name) -> const double* {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return values + i;
    return nullptr;
  });
}

}  // namespace relcont
