#include "dynint/expr/expression.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace dynint::expr {
namespace {

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = v;
  return n;
}

NodePtr make_var(std::size_t slot) {
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->slot = slot;
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::constant && n->value == v; }

NodePtr make(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  // Constant folding keeps derivative trees small; only exact identities.
  if (op == Op::add) {
    if (is_const(lhs, 0.0)) return rhs;
    if (is_const(rhs, 0.0)) return lhs;
  } else if (op == Op::sub) {
    if (is_const(rhs, 0.0)) return lhs;
    if (is_const(lhs, 0.0)) return make(Op::neg, rhs);
  } else if (op == Op::mul) {
    if (is_const(lhs, 0.0) || is_const(rhs, 0.0)) return make_const(0.0);
    if (is_const(lhs, 1.0)) return rhs;
    if (is_const(rhs, 1.0)) return lhs;
  } else if (op == Op::div) {
    if (is_const(lhs, 0.0)) return make_const(0.0);
    if (is_const(rhs, 1.0)) return lhs;
  } else if (op == Op::neg) {
    if (lhs->op == Op::constant) return make_const(-lhs->value);
    if (lhs->op == Op::neg) return lhs->lhs;
  } else if (op == Op::pow) {
    if (is_const(rhs, 1.0)) return lhs;
    if (is_const(rhs, 0.0)) return make_const(1.0);
  }
  if (lhs->op == Op::constant && (!rhs || rhs->op == Op::constant) && op != Op::pow && op != Op::div &&
      op != Op::log && op != Op::sqrt) {
    const double a = lhs->value;
    const double b = rhs ? rhs->value : 0.0;
    switch (op) {
      case Op::add:
        return make_const(a + b);
      case Op::sub:
        return make_const(a - b);
      case Op::mul:
        return make_const(a * b);
      default:
        break;
    }
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, const VariableResolver& resolve) : text_(text), resolve_(resolve) {}

  NodePtr parse() {
    NodePtr n = expression();
    skip();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return n;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  NodePtr expression() {
    NodePtr n = term();
    for (;;) {
      if (accept('+'))
        n = make(Op::add, n, term());
      else if (accept('-'))
        n = make(Op::sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*'))
        n = make(Op::mul, n, unary());
      else if (accept('/'))
        n = make(Op::div, n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr n = expression();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    double v = 0.0;
    const auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (res.ec != std::errc()) throw ParseError("malformed number", start);
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return make_const(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    skip();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      NodePtr arg = expression();
      if (name == "pow") {
        expect(',');
        NodePtr e = expression();
        expect(')');
        return make(Op::pow, arg, e);
      }
      expect(')');
      if (name == "exp") return make(Op::exp, arg);
      if (name == "log") return make(Op::log, arg);
      if (name == "sin") return make(Op::sin, arg);
      if (name == "cos") return make(Op::cos, arg);
      if (name == "sqrt") return make(Op::sqrt, arg);
      throw ParseError("unknown function '" + std::string(name) + "'", start);
    }
    if (name == "pi") return make_const(3.14159265358979323846);
    const auto slot = resolve_(name);
    if (!slot) throw ParseError("unknown variable '" + std::string(name) + "'", start);
    return make_var(*slot);
  }

  std::string_view text_;
  const VariableResolver& resolve_;
  std::size_t pos_ = 0;
};

std::optional<std::size_t> indexed(std::string_view name, char prefix, std::size_t count) {
  if (name.size() < 2 || name[0] != prefix) return std::nullopt;
  std::size_t idx = 0;
  const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
  if (res.ec != std::errc() || res.ptr != name.data() + name.size()) return std::nullopt;
  if (idx < 1 || idx > count) return std::nullopt;
  return idx - 1;
}

NodePtr differentiate(const NodePtr& n, std::size_t slot) {
  switch (n->op) {
    case Op::constant:
      return make_const(0.0);
    case Op::variable:
      return make_const(n->slot == slot ? 1.0 : 0.0);
    case Op::add:
      return make(Op::add, differentiate(n->lhs, slot), differentiate(n->rhs, slot));
    case Op::sub:
      return make(Op::sub, differentiate(n->lhs, slot), differentiate(n->rhs, slot));
    case Op::neg:
      return make(Op::neg, differentiate(n->lhs, slot));
    case Op::mul:
      return make(Op::add, make(Op::mul, differentiate(n->lhs, slot), n->rhs),
                  make(Op::mul, n->lhs, differentiate(n->rhs, slot)));
    case Op::div: {
      // (a'b - ab') / b^2
      NodePtr num = make(Op::sub, make(Op::mul, differentiate(n->lhs, slot), n->rhs),
                         make(Op::mul, n->lhs, differentiate(n->rhs, slot)));
      return make(Op::div, num, make(Op::mul, n->rhs, n->rhs));
    }
    case Op::pow: {
      NodePtr db = differentiate(n->lhs, slot);
      if (n->rhs->op == Op::constant) {
        const double e = n->rhs->value;
        return make(Op::mul, make(Op::mul, make_const(e), make(Op::pow, n->lhs, make_const(e - 1.0))), db);
      }
      // d(a^b) = a^b (b' log a + b a'/a)
      NodePtr de = differentiate(n->rhs, slot);
      NodePtr inner = make(Op::add, make(Op::mul, de, make(Op::log, n->lhs)),
                           make(Op::div, make(Op::mul, n->rhs, db), n->lhs));
      return make(Op::mul, n, inner);
    }
    case Op::exp:
      return make(Op::mul, n, differentiate(n->lhs, slot));
    case Op::log:
      return make(Op::div, differentiate(n->lhs, slot), n->lhs);
    case Op::sin:
      return make(Op::mul, make(Op::cos, n->lhs), differentiate(n->lhs, slot));
    case Op::cos:
      return make(Op::neg, make(Op::mul, make(Op::sin, n->lhs), differentiate(n->lhs, slot)));
    case Op::sqrt:
      return make(Op::div, differentiate(n->lhs, slot), make(Op::mul, make_const(2.0), n));
  }
  throw ConfigError("corrupt expression tree");
}

void emit(const NodePtr& n, std::ostringstream& os) {
  switch (n->op) {
    case Op::constant: {
      std::ostringstream v;
      v.precision(17);
      v << n->value;
      if (n->value < 0) os << '(' << v.str() << ')';
      else os << v.str();
      return;
    }
    case Op::variable:
      os << "$" << n->slot;
      return;
    case Op::neg:
      os << "(-";
      emit(n->lhs, os);
      os << ')';
      return;
    case Op::exp:
    case Op::log:
    case Op::sin:
    case Op::cos:
    case Op::sqrt: {
      static const char* names[] = {"exp", "log", "sin", "cos", "sqrt"};
      os << names[static_cast<int>(n->op) - static_cast<int>(Op::exp)] << '(';
      emit(n->lhs, os);
      os << ')';
      return;
    }
    default: {
      const char sym = n->op == Op::add ? '+' : n->op == Op::sub ? '-' : n->op == Op::mul ? '*' : n->op == Op::div ? '/' : '^';
      os << '(';
      emit(n->lhs, os);
      os << sym;
      emit(n->rhs, os);
      os << ')';
    }
  }
}

}  // namespace

VariableResolver coordinate_resolver(std::size_t dim, bool phase_space) {
  return [dim, phase_space](std::string_view name) -> std::optional<std::size_t> {
    if (phase_space) {
      const std::size_t n = dim / 2;
      if (auto i = indexed(name, 'x', n)) return i;
      if (auto i = indexed(name, 'q', n)) return i;
      if (auto i = indexed(name, 'p', n)) return n + *i;
      return std::nullopt;
    }
    return indexed(name, 'x', dim);
  };
}

VariableResolver momentum_resolver(std::size_t n) {
  return [n](std::string_view name) { return indexed(name, 'p', n); };
}

Expression Expression::parse(std::string_view text, const VariableResolver& resolve) {
  Parser p(text, resolve);
  return from_tree(p.parse());
}

Expression Expression::from_tree(NodePtr root) {
  Expression e;
  e.root_ = std::move(root);
  e.compile();
  return e;
}

Expression Expression::derivative(std::size_t slot) const {
  if (!root_) throw ConfigError("derivative of an empty expression");
  return from_tree(differentiate(root_, slot));
}

std::string Expression::to_string() const {
  if (!root_) return "";
  std::ostringstream os;
  emit(root_, os);
  return os.str();
}

void Expression::compile() {
  program_.clear();
  arity_ = 0;
  // Iterative post-order walk.
  std::vector<std::pair<const Node*, bool>> todo{{root_.get(), false}};
  while (!todo.empty()) {
    auto [n, expanded] = todo.back();
    todo.pop_back();
    if (expanded || n->op == Op::constant || n->op == Op::variable) {
      program_.push_back({n->op, n->value, n->slot});
      if (n->op == Op::variable) arity_ = std::max(arity_, n->slot + 1);
      continue;
    }
    todo.push_back({n, true});
    if (n->rhs) todo.push_back({n->rhs.get(), false});
    todo.push_back({n->lhs.get(), false});
  }
}

}  // namespace dynint::expr
