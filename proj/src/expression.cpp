#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>

#include "kramers/ad.hpp"
#include "kramers/errors.hpp"
#include "kramers/potential.hpp"

namespace kramers {

namespace {

const std::set<std::string> kSmooth = {"sin", "cos", "exp", "log", "tanh"};
const std::set<std::string> kNonSmooth = {"abs",  "sign", "sgn",       "floor", "ceil", "round",
                                          "max",  "min",  "heaviside", "step",  "mod",  "fabs",
                                          "trunc"};

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

std::string tok_label(const Token& t) {
  switch (t.kind) {
    case Tok::Number: return "NUMBER '" + t.text + "'";
    case Tok::Ident: return "IDENT '" + t.text + "'";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      std::string mant = s.substr(start, i - start);
      if (mant == ".") throw SyntaxError(start, {"NUMBER"}, "'.'");
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
          i = j;
        }
      }
      Token t{Tok::Number, start, s.substr(start, i - start)};
      t.number = std::strtod(t.text.c_str(), nullptr);
      out.push_back(t);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, start, s.substr(start, i - start)});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default:
        throw SyntaxError(i, {"NUMBER", "IDENT", "(", "-"}, std::string("'") + c + "'");
    }
    out.push_back({k, i, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, const std::map<std::string, double>& params, int max_dim)
      : toks_(tokenize(text)), params_(params), max_dim_(max_dim) {}

  Expression run() {
    int root = expr();
    if (peek().kind != Tok::End) fail({"+", "-", "*", "/", "^", "end of input"});
    return Expression(std::move(nodes_), root);
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  const std::map<std::string, double>& params_;
  int max_dim_;
  std::vector<ExprNode> nodes_;

  const Token& peek() const { return toks_[at_]; }
  Token take() { return toks_[at_++]; }
  [[noreturn]] void fail(std::vector<std::string> expected) {
    throw SyntaxError(peek().pos, std::move(expected), tok_label(peek()));
  }

  int push(ExprNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }
  int binary(Op op, int l, int r) {
    ExprNode n;
    n.op = op;
    n.lhs = l;
    n.rhs = r;
    return push(n);
  }

  int expr() {
    int l = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Op op = take().kind == Tok::Plus ? Op::Add : Op::Sub;
      l = binary(op, l, term());
    }
    return l;
  }
  int term() {
    int l = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      Op op = take().kind == Tok::Star ? Op::Mul : Op::Div;
      l = binary(op, l, factor());
    }
    return l;
  }
  int factor() {
    int l = unary();
    if (peek().kind == Tok::Caret) {
      take();
      l = binary(Op::Pow, l, unary());
    }
    return l;
  }
  int unary() {
    if (peek().kind == Tok::Minus) {
      take();
      ExprNode n;
      n.op = Op::Neg;
      n.lhs = base();
      return push(n);
    }
    return base();
  }
  int base() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      ExprNode n;
      n.op = Op::Number;
      n.number = take().number;
      return push(n);
    }
    if (t.kind == Tok::LParen) {
      take();
      int e = expr();
      if (peek().kind != Tok::RParen) fail({")", "+", "-", "*", "/", "^"});
      take();
      return e;
    }
    if (t.kind == Tok::Ident) {
      Token id = take();
      if (peek().kind == Tok::LParen) {
        if (kNonSmooth.count(id.text))
          raise(ErrorKind::NonSmoothFunction,
                "'" + id.text + "' at position " + std::to_string(id.pos) + " is not smooth");
        if (!kSmooth.count(id.text))
          raise(ErrorKind::UnknownIdentifier,
                "unknown function '" + id.text + "' at position " + std::to_string(id.pos));
        take();
        int arg = expr();
        if (peek().kind != Tok::RParen) fail({")", "+", "-", "*", "/", "^"});
        take();
        ExprNode n;
        n.lhs = arg;
        if (id.text == "sin") n.op = Op::Sin;
        else if (id.text == "cos") n.op = Op::Cos;
        else if (id.text == "exp") n.op = Op::Exp;
        else if (id.text == "log") n.op = Op::Log;
        else n.op = Op::Tanh;
        return push(n);
      }
      if (kSmooth.count(id.text)) {
        fail({"("});
      }
      if (kNonSmooth.count(id.text))
        raise(ErrorKind::NonSmoothFunction, "'" + id.text + "' is not smooth");
      ExprNode n;
      if (id.text == "x") {
        n.op = Op::VarX;
      } else if (id.text == "y" && max_dim_ >= 2) {
        n.op = Op::VarY;
      } else {
        auto it = params_.find(id.text);
        if (it == params_.end())
          raise(ErrorKind::UnknownIdentifier,
                "unknown identifier '" + id.text + "' at position " + std::to_string(id.pos));
        n.op = Op::Param;
        n.name = id.text;
        n.number = it->second;
      }
      return push(n);
    }
    fail({"NUMBER", "IDENT", "(", "-"});
  }
};

bool has_variable(const std::vector<ExprNode>& nodes, int i) {
  const ExprNode& n = nodes[i];
  if (n.op == Op::VarX || n.op == Op::VarY) return true;
  if (n.lhs >= 0 && has_variable(nodes, n.lhs)) return true;
  if (n.rhs >= 0 && has_variable(nodes, n.rhs)) return true;
  return false;
}

double fold_constant(const std::vector<ExprNode>& nodes, int i) {
  const ExprNode& n = nodes[i];
  auto l = [&] { return fold_constant(nodes, n.lhs); };
  auto r = [&] { return fold_constant(nodes, n.rhs); };
  switch (n.op) {
    case Op::Number:
    case Op::Param: return n.number;
    case Op::Neg: return -l();
    case Op::Add: return l() + r();
    case Op::Sub: return l() - r();
    case Op::Mul: return l() * r();
    case Op::Div: return l() / r();
    case Op::Pow: return std::pow(l(), r());
    case Op::Sin: return std::sin(l());
    case Op::Cos: return std::cos(l());
    case Op::Exp: return std::exp(l());
    case Op::Log: return std::log(l());
    case Op::Tanh: return std::tanh(l());
    default: return 0.0;
  }
}

std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const std::vector<ExprNode>& nodes, int i, std::string& out) {
  const ExprNode& n = nodes[i];
  auto bin = [&](const char* op) {
    out += "(";
    print_node(nodes, n.lhs, out);
    out += op;
    print_node(nodes, n.rhs, out);
    out += ")";
  };
  auto fn = [&](const char* name) {
    out += name;
    out += "(";
    print_node(nodes, n.lhs, out);
    out += ")";
  };
  switch (n.op) {
    case Op::Number: out += fmt_number(n.number); break;
    case Op::VarX: out += "x"; break;
    case Op::VarY: out += "y"; break;
    case Op::Param: out += n.name; break;
    case Op::Neg:
      out += "(-";
      print_node(nodes, n.lhs, out);
      out += ")";
      break;
    case Op::Add: bin("+"); break;
    case Op::Sub: bin("-"); break;
    case Op::Mul: bin("*"); break;
    case Op::Div: bin("/"); break;
    case Op::Pow: bin("^"); break;
    case Op::Sin: fn("sin"); break;
    case Op::Cos: fn("cos"); break;
    case Op::Exp: fn("exp"); break;
    case Op::Log: fn("log"); break;
    case Op::Tanh: fn("tanh"); break;
  }
}

bool same_node(const std::vector<ExprNode>& a, int i, const std::vector<ExprNode>& b, int j) {
  if ((i < 0) != (j < 0)) return false;
  if (i < 0) return true;
  const ExprNode& x = a[i];
  const ExprNode& y = b[j];
  if (x.op != y.op || x.name != y.name) return false;
  if ((x.op == Op::Number || x.op == Op::Param) && std::memcmp(&x.number, &y.number, sizeof(double)) != 0)
    return false;
  return same_node(a, x.lhs, b, y.lhs) && same_node(a, x.rhs, b, y.rhs);
}

}  // namespace

Expression::Expression(std::vector<ExprNode> nodes, int root) : nodes_(std::move(nodes)), root_(root) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    ExprNode& n = nodes_[i];
    if (n.op != Op::Pow) continue;
    if (has_variable(nodes_, n.rhs)) {
      n.pow_mode = 2;
      continue;
    }
    double c = fold_constant(nodes_, n.rhs);
    if (!std::isfinite(c)) raise(ErrorKind::EvaluationError, "constant exponent is not finite");
    n.const_exponent = c;
    if (std::nearbyint(c) == c && std::abs(c) <= 1024.0) {
      n.pow_mode = 0;
      n.int_exponent = static_cast<int>(c);
    } else {
      n.pow_mode = 1;
    }
  }
}

bool Expression::uses_y() const {
  for (const auto& n : nodes_)
    if (n.op == Op::VarY) return true;
  return false;
}

std::string Expression::to_string() const {
  std::string out;
  if (root_ >= 0) print_node(nodes_, root_, out);
  return out;
}

bool Expression::same_tree(const Expression& other) const {
  return same_node(nodes_, root_, other.nodes_, other.root_);
}

template <class T>
T Expression::evaluate(const T& x, const T& y) const {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::tanh;
  using ad::value_of;
  thread_local std::vector<T> vals;
  if (vals.size() < nodes_.size()) vals.resize(nodes_.size());
  for (int i = 0; i <= root_; ++i) {
    const ExprNode& n = nodes_[i];
    switch (n.op) {
      case Op::Number:
      case Op::Param: vals[i] = T(n.number); break;
      case Op::VarX: vals[i] = x; break;
      case Op::VarY: vals[i] = y; break;
      case Op::Neg: vals[i] = -vals[n.lhs]; break;
      case Op::Add: vals[i] = vals[n.lhs] + vals[n.rhs]; break;
      case Op::Sub: vals[i] = vals[n.lhs] - vals[n.rhs]; break;
      case Op::Mul: vals[i] = vals[n.lhs] * vals[n.rhs]; break;
      case Op::Div:
        if (value_of(vals[n.rhs]) == 0.0) raise(ErrorKind::EvaluationError, "division by zero");
        vals[i] = vals[n.lhs] / vals[n.rhs];
        break;
      case Op::Pow: {
        const T& b = vals[n.lhs];
        if (n.pow_mode == 0) {
          if (n.int_exponent < 0 && value_of(b) == 0.0) raise(ErrorKind::EvaluationError, "zero to a negative power");
          vals[i] = ad::ipow(b, n.int_exponent);
        } else {
          if (!(value_of(b) > 0.0)) raise(ErrorKind::EvaluationError, "non-integer power of a non-positive base");
          if (n.pow_mode == 1)
            vals[i] = ad::pow_const(b, n.const_exponent);
          else
            vals[i] = exp(vals[n.rhs] * log(b));
        }
        break;
      }
      case Op::Sin: vals[i] = sin(vals[n.lhs]); break;
      case Op::Cos: vals[i] = cos(vals[n.lhs]); break;
      case Op::Exp: vals[i] = exp(vals[n.lhs]); break;
      case Op::Log:
        if (!(value_of(vals[n.lhs]) > 0.0)) raise(ErrorKind::EvaluationError, "log of a non-positive value");
        vals[i] = log(vals[n.lhs]);
        break;
      case Op::Tanh: vals[i] = tanh(vals[n.lhs]); break;
    }
  }
  return vals[root_];
}

template double Expression::evaluate<double>(const double&, const double&) const;
template ad::Grad<1> Expression::evaluate<ad::Grad<1>>(const ad::Grad<1>&, const ad::Grad<1>&) const;
template ad::Grad<2> Expression::evaluate<ad::Grad<2>>(const ad::Grad<2>&, const ad::Grad<2>&) const;
template ad::Jet<1> Expression::evaluate<ad::Jet<1>>(const ad::Jet<1>&, const ad::Jet<1>&) const;
template ad::Jet<2> Expression::evaluate<ad::Jet<2>>(const ad::Jet<2>&, const ad::Jet<2>&) const;

Expression parse_expression(const std::string& text, const std::map<std::string, double>& params, int max_dim) {
  for (const auto& [name, v] : params) {
    if (name == "x" || name == "y" || kSmooth.count(name) || kNonSmooth.count(name))
      raise(ErrorKind::ConfigError, "parameter name '" + name + "' is reserved");
    if (!std::isfinite(v)) raise(ErrorKind::ConfigError, "parameter '" + name + "' is not finite");
  }
  return Parser(text, params, max_dim).run();
}

PotentialSpec parse_potential(const std::string& text, const std::map<std::string, double>& params) {
  PotentialSpec spec;
  spec.text = text;
  spec.params = params;
  auto e = std::make_shared<Expression>(parse_expression(text, params));
  spec.dimension = e->uses_y() ? 2 : 1;
  spec.expression = std::move(e);
  return spec;
}

PotentialSpec reparse(const PotentialSpec& spec) {
  PotentialSpec out = spec;
  out.text = spec.expression->to_string();
  out.expression = std::make_shared<Expression>(parse_expression(out.text, spec.params));
  return out;
}

}  // namespace kramers
