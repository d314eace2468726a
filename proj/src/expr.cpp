#include "nhdyn/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

namespace nhdyn {

namespace {

bool validIdentifier(std::string_view name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

const std::set<std::string, std::less<>>& functionNames() {
  static const std::set<std::string, std::less<>> names = {"sin", "cos", "tan",
                                                           "exp", "log", "sqrt"};
  return names;
}

}  // namespace

// ---------------------------------------------------------------------------
// SymbolTable

SymbolTable::SymbolTable(std::vector<std::string> coords, std::vector<std::string> params)
    : coords_(std::move(coords)), params_(std::move(params)) {
  if (coords_.empty()) throw Error("a model needs at least one coordinate");
  velocityNames_.reserve(coords_.size());
  for (const auto& c : coords_) velocityNames_.push_back("d" + c);

  auto insert = [&](const std::string& name, int slot) {
    if (!validIdentifier(name)) throw Error("invalid identifier '" + name + "'");
    if (functionNames().count(name)) throw Error("'" + name + "' is a reserved function name");
    if (!slots_.emplace(name, slot).second)
      throw Error("name '" + name + "' collides within the coordinate/velocity/parameter namespace");
  };
  int slot = 0;
  for (const auto& c : coords_) insert(c, slot++);
  for (const auto& v : velocityNames_) insert(v, slot++);
  for (const auto& p : params_) insert(p, slot++);
}

int SymbolTable::findSlot(std::string_view name) const {
  auto it = slots_.find(name);
  return it == slots_.end() ? -1 : it->second;
}

int SymbolTable::requireSlot(std::string_view name) const {
  int slot = findSlot(name);
  if (slot < 0) throw UnknownVariable(std::string(name));
  return slot;
}

VarKind SymbolTable::kindOf(int slot) const {
  const int n = this->n();
  if (slot < n) return VarKind::Coordinate;
  if (slot < 2 * n) return VarKind::Velocity;
  return VarKind::Parameter;
}

const std::string& SymbolTable::slotName(int slot) const {
  const int n = this->n();
  if (slot < n) return coords_[slot];
  if (slot < 2 * n) return velocityNames_[slot - n];
  return params_[slot - 2 * n];
}

int SymbolTable::coordIndexOf(std::string_view name) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == name) return static_cast<int>(i);
  return -1;
}

// ---------------------------------------------------------------------------
// Bindings

Bindings::Bindings(std::shared_ptr<const SymbolTable> table, std::vector<double> values)
    : table_(std::move(table)), values_(std::move(values)) {
  if (values_.size() != table_->slotCount())
    throw Error("binding vector has " + std::to_string(values_.size()) + " entries, table needs " +
                std::to_string(table_->slotCount()));
}

Bindings Bindings::fromMap(std::shared_ptr<const SymbolTable> table,
                           const std::map<std::string, double>& values) {
  std::vector<double> v(table->slotCount());
  for (std::size_t slot = 0; slot < v.size(); ++slot) {
    auto it = values.find(table->slotName(static_cast<int>(slot)));
    if (it == values.end()) throw UnboundVariable(table->slotName(static_cast<int>(slot)));
    v[slot] = it->second;
  }
  return Bindings(std::move(table), std::move(v));
}

// ---------------------------------------------------------------------------
// Node construction with zero/one constant folding

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;

NodePtr mkConst(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->value = v;
  return n;
}

NodePtr mkVar(int slot, VarKind kind) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Variable;
  n->slot = slot;
  n->varKind = kind;
  return n;
}

bool isConst(const NodePtr& n, double v) {
  return n->kind == Node::Kind::Constant && n->value == v;
}
bool isConst(const NodePtr& n) { return n->kind == Node::Kind::Constant; }

NodePtr mkUnary(UnaryOp op, NodePtr a) {
  if (op == UnaryOp::Neg && isConst(a)) return mkConst(-a->value);
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->uop = op;
  n->a = std::move(a);
  return n;
}

NodePtr mkBinary(BinaryOp op, NodePtr a, NodePtr b) {
  auto node = [&] {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->bop = op;
    n->a = a;
    n->b = b;
    return n;
  };
  switch (op) {
    case BinaryOp::Add:
      if (isConst(a, 0.0)) return b;
      if (isConst(b, 0.0)) return a;
      if (isConst(a) && isConst(b)) return mkConst(a->value + b->value);
      break;
    case BinaryOp::Sub:
      if (isConst(b, 0.0)) return a;
      if (isConst(a, 0.0)) return mkUnary(UnaryOp::Neg, b);
      if (isConst(a) && isConst(b)) return mkConst(a->value - b->value);
      break;
    case BinaryOp::Mul:
      if (isConst(a, 0.0) || isConst(b, 0.0)) return mkConst(0.0);
      if (isConst(a, 1.0)) return b;
      if (isConst(b, 1.0)) return a;
      if (isConst(a) && isConst(b)) return mkConst(a->value * b->value);
      break;
    case BinaryOp::Div:
      if (isConst(a, 0.0) && !isConst(b, 0.0)) return mkConst(0.0);
      if (isConst(b, 1.0)) return a;
      if (isConst(a) && isConst(b) && b->value != 0.0 &&
          std::isfinite(a->value / b->value))
        return mkConst(a->value / b->value);
      break;
    case BinaryOp::Pow:
      if (isConst(b, 1.0)) return a;
      if (isConst(b, 0.0)) return mkConst(1.0);
      if (isConst(a) && isConst(b)) {
        double v = std::pow(a->value, b->value);
        if (std::isfinite(v)) return mkConst(v);
      }
      break;
  }
  return node();
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over a small token stream.

struct Token {
  enum class Kind { Number, Ident, Op, LParen, RParen, End } kind;
  std::size_t pos = 0;
  double number = 0.0;
  std::string text;  // Ident name or single-char operator
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t;
    t.pos = pos_;
    if (pos_ >= src_.size()) {
      t.kind = Token::Kind::End;
      return t;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      const char* begin = src_.data() + pos_;
      char* end = nullptr;
      t.number = std::strtod(begin, &end);
      if (end == begin) throw SyntaxError(pos_, "malformed numeric literal");
      pos_ += static_cast<std::size_t>(end - begin);
      t.kind = Token::Kind::Number;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_'))
        ++pos_;
      t.kind = Token::Kind::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    ++pos_;
    switch (c) {
      case '(':
        t.kind = Token::Kind::LParen;
        return t;
      case ')':
        t.kind = Token::Kind::RParen;
        return t;
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
        t.kind = Token::Kind::Op;
        t.text = std::string(1, c);
        return t;
      default:
        throw SyntaxError(t.pos, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, const SymbolTable& table) : lexer_(src), table_(table) {
    advance();
  }

  NodePtr parseAll() {
    if (cur_.kind == Token::Kind::End) throw SyntaxError(0, "empty expression");
    NodePtr e = parseSum();
    if (cur_.kind != Token::Kind::End) {
      if (cur_.kind == Token::Kind::RParen)
        throw SyntaxError(cur_.pos, "unbalanced ')'");
      throw SyntaxError(cur_.pos, "unexpected trailing input");
    }
    return e;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  bool atOp(char c) const { return cur_.kind == Token::Kind::Op && cur_.text[0] == c; }

  NodePtr parseSum() {
    NodePtr left = parseProduct();
    while (atOp('+') || atOp('-')) {
      BinaryOp op = atOp('+') ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      left = mkBinary(op, left, parseProduct());
    }
    return left;
  }

  NodePtr parseProduct() {
    NodePtr left = parseUnary();
    while (atOp('*') || atOp('/')) {
      BinaryOp op = atOp('*') ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      left = mkBinary(op, left, parseUnary());
    }
    return left;
  }

  NodePtr parseUnary() {
    if (atOp('-')) {
      advance();
      return mkUnary(UnaryOp::Neg, parseUnary());
    }
    if (atOp('+')) {
      advance();
      return parseUnary();
    }
    return parsePower();
  }

  NodePtr parsePower() {
    NodePtr base = parseAtom();
    if (atOp('^')) {
      advance();
      // Right-associative; the exponent may itself carry a unary minus.
      return mkBinary(BinaryOp::Pow, base, parseUnary());
    }
    return base;
  }

  NodePtr parseAtom() {
    switch (cur_.kind) {
      case Token::Kind::Number: {
        double v = cur_.number;
        advance();
        return mkConst(v);
      }
      case Token::Kind::Ident: {
        std::string name = cur_.text;
        std::size_t pos = cur_.pos;
        advance();
        if (cur_.kind == Token::Kind::LParen) {
          if (!functionNames().count(name))
            throw SyntaxError(pos, "unknown function '" + name + "'");
          advance();
          NodePtr arg = parseSum();
          if (cur_.kind != Token::Kind::RParen)
            throw SyntaxError(cur_.pos, "unbalanced '(' in call to '" + name + "'");
          advance();
          return mkUnary(functionOp(name), std::move(arg));
        }
        int slot = table_.findSlot(name);
        if (slot < 0) throw SyntaxError(pos, "unknown identifier '" + name + "'");
        return mkVar(slot, table_.kindOf(slot));
      }
      case Token::Kind::LParen: {
        std::size_t openPos = cur_.pos;
        advance();
        NodePtr e = parseSum();
        if (cur_.kind != Token::Kind::RParen)
          throw SyntaxError(openPos, "unbalanced '('");
        advance();
        return e;
      }
      case Token::Kind::Op:
        throw SyntaxError(cur_.pos, "dangling operator '" + cur_.text + "'");
      case Token::Kind::RParen:
        throw SyntaxError(cur_.pos, "unbalanced ')'");
      case Token::Kind::End:
        throw SyntaxError(cur_.pos, "dangling operator at end of input");
    }
    throw SyntaxError(cur_.pos, "unexpected token");
  }

  static UnaryOp functionOp(const std::string& name) {
    if (name == "sin") return UnaryOp::Sin;
    if (name == "cos") return UnaryOp::Cos;
    if (name == "tan") return UnaryOp::Tan;
    if (name == "exp") return UnaryOp::Exp;
    if (name == "log") return UnaryOp::Log;
    return UnaryOp::Sqrt;
  }

  Lexer lexer_;
  Token cur_;
  const SymbolTable& table_;
};

// ---------------------------------------------------------------------------
// Evaluation

double evalNode(const Node& node, const Bindings& b) {
  switch (node.kind) {
    case Node::Kind::Constant:
      return node.value;
    case Node::Kind::Variable:
      return b[static_cast<std::size_t>(node.slot)];
    case Node::Kind::Unary: {
      double x = evalNode(*node.a, b);
      switch (node.uop) {
        case UnaryOp::Neg:
          return -x;
        case UnaryOp::Sin:
          return std::sin(x);
        case UnaryOp::Cos:
          return std::cos(x);
        case UnaryOp::Tan:
          return std::tan(x);
        case UnaryOp::Exp:
          return std::exp(x);
        case UnaryOp::Log:
          if (x < 0.0) throw DomainError("log of negative argument");
          return std::log(x);
        case UnaryOp::Sqrt:
          if (x < 0.0) throw DomainError("sqrt of negative argument");
          return std::sqrt(x);
      }
      break;
    }
    case Node::Kind::Binary: {
      double x = evalNode(*node.a, b);
      double y = evalNode(*node.b, b);
      switch (node.bop) {
        case BinaryOp::Add:
          return x + y;
        case BinaryOp::Sub:
          return x - y;
        case BinaryOp::Mul:
          return x * y;
        case BinaryOp::Div:
          return x / y;
        case BinaryOp::Pow:
          return std::pow(x, y);
      }
      break;
    }
  }
  return 0.0;  // unreachable
}

// ---------------------------------------------------------------------------
// Differentiation

NodePtr diffNode(const NodePtr& node, int slot) {
  switch (node->kind) {
    case Node::Kind::Constant:
      return mkConst(0.0);
    case Node::Kind::Variable:
      return mkConst(node->slot == slot ? 1.0 : 0.0);
    case Node::Kind::Unary: {
      NodePtr du = diffNode(node->a, slot);
      const NodePtr& u = node->a;
      switch (node->uop) {
        case UnaryOp::Neg:
          return mkUnary(UnaryOp::Neg, du);
        case UnaryOp::Sin:
          return mkBinary(BinaryOp::Mul, mkUnary(UnaryOp::Cos, u), du);
        case UnaryOp::Cos:
          return mkUnary(UnaryOp::Neg, mkBinary(BinaryOp::Mul, mkUnary(UnaryOp::Sin, u), du));
        case UnaryOp::Tan:
          return mkBinary(BinaryOp::Div, du,
                          mkBinary(BinaryOp::Pow, mkUnary(UnaryOp::Cos, u), mkConst(2.0)));
        case UnaryOp::Exp:
          return mkBinary(BinaryOp::Mul, mkUnary(UnaryOp::Exp, u), du);
        case UnaryOp::Log:
          return mkBinary(BinaryOp::Div, du, u);
        case UnaryOp::Sqrt:
          return mkBinary(BinaryOp::Div, du,
                          mkBinary(BinaryOp::Mul, mkConst(2.0), mkUnary(UnaryOp::Sqrt, u)));
      }
      break;
    }
    case Node::Kind::Binary: {
      const NodePtr& u = node->a;
      const NodePtr& v = node->b;
      NodePtr du = diffNode(u, slot);
      NodePtr dv = diffNode(v, slot);
      switch (node->bop) {
        case BinaryOp::Add:
          return mkBinary(BinaryOp::Add, du, dv);
        case BinaryOp::Sub:
          return mkBinary(BinaryOp::Sub, du, dv);
        case BinaryOp::Mul:
          return mkBinary(BinaryOp::Add, mkBinary(BinaryOp::Mul, du, v),
                          mkBinary(BinaryOp::Mul, u, dv));
        case BinaryOp::Div:
          return mkBinary(BinaryOp::Div,
                          mkBinary(BinaryOp::Sub, mkBinary(BinaryOp::Mul, du, v),
                                   mkBinary(BinaryOp::Mul, u, dv)),
                          mkBinary(BinaryOp::Pow, v, mkConst(2.0)));
        case BinaryOp::Pow:
          if (isConst(v)) {
            // d(u^c) = c * u^(c-1) * du
            return mkBinary(
                BinaryOp::Mul,
                mkBinary(BinaryOp::Mul, mkConst(v->value),
                         mkBinary(BinaryOp::Pow, u, mkConst(v->value - 1.0))),
                du);
          }
          // d(u^v) = u^v * (dv*log(u) + v*du/u)
          return mkBinary(
              BinaryOp::Mul, mkBinary(BinaryOp::Pow, u, v),
              mkBinary(BinaryOp::Add, mkBinary(BinaryOp::Mul, dv, mkUnary(UnaryOp::Log, u)),
                       mkBinary(BinaryOp::Div, mkBinary(BinaryOp::Mul, v, du), u)));
      }
      break;
    }
  }
  return mkConst(0.0);  // unreachable
}

// ---------------------------------------------------------------------------
// Canonical printing.
//
// Precedence classes: Add/Sub 10, Mul/Div 20, Neg 30, Pow 40, atoms 50.
// Parenthesization is chosen so parse(print(tree)) rebuilds the tree exactly.

struct Printed {
  std::string text;
  int prec;
};

std::string formatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

Printed printWith(const Node& node, const SymbolTable& table);

std::string childWith(const NodePtr& n, int minPrec, const SymbolTable& table) {
  Printed p = printWith(*n, table);
  if (p.prec < minPrec) return "(" + p.text + ")";
  return p.text;
}

Printed printWith(const Node& node, const SymbolTable& table) {
  switch (node.kind) {
    case Node::Kind::Constant: {
      std::string s = formatDouble(node.value);
      return {s, node.value < 0.0 ? 30 : 50};
    }
    case Node::Kind::Variable:
      return {table.slotName(node.slot), 50};
    case Node::Kind::Unary: {
      switch (node.uop) {
        case UnaryOp::Neg:
          return {"-" + childWith(node.a, 30, table), 30};
        case UnaryOp::Sin:
          return {"sin(" + printWith(*node.a, table).text + ")", 50};
        case UnaryOp::Cos:
          return {"cos(" + printWith(*node.a, table).text + ")", 50};
        case UnaryOp::Tan:
          return {"tan(" + printWith(*node.a, table).text + ")", 50};
        case UnaryOp::Exp:
          return {"exp(" + printWith(*node.a, table).text + ")", 50};
        case UnaryOp::Log:
          return {"log(" + printWith(*node.a, table).text + ")", 50};
        case UnaryOp::Sqrt:
          return {"sqrt(" + printWith(*node.a, table).text + ")", 50};
      }
      break;
    }
    case Node::Kind::Binary: {
      switch (node.bop) {
        case BinaryOp::Add:
          return {childWith(node.a, 10, table) + " + " + childWith(node.b, 11, table), 10};
        case BinaryOp::Sub:
          return {childWith(node.a, 10, table) + " - " + childWith(node.b, 11, table), 10};
        case BinaryOp::Mul:
          return {childWith(node.a, 20, table) + "*" + childWith(node.b, 21, table), 20};
        case BinaryOp::Div:
          return {childWith(node.a, 20, table) + "/" + childWith(node.b, 21, table), 20};
        case BinaryOp::Pow:
          return {childWith(node.a, 41, table) + "^" + childWith(node.b, 21, table), 40};
      }
      break;
    }
  }
  return {"", 0};
}

bool nodesEqual(const NodePtr& x, const NodePtr& y) {
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Node::Kind::Constant:
      return x->value == y->value;
    case Node::Kind::Variable:
      return x->slot == y->slot;
    case Node::Kind::Unary:
      return x->uop == y->uop && nodesEqual(x->a, y->a);
    case Node::Kind::Binary:
      return x->bop == y->bop && nodesEqual(x->a, y->a) && nodesEqual(x->b, y->b);
  }
  return false;
}

void collectNames(const NodePtr& n, const SymbolTable& table, std::set<std::string>& out) {
  switch (n->kind) {
    case Node::Kind::Constant:
      return;
    case Node::Kind::Variable:
      out.insert(table.slotName(n->slot));
      return;
    case Node::Kind::Unary:
      collectNames(n->a, table, out);
      return;
    case Node::Kind::Binary:
      collectNames(n->a, table, out);
      collectNames(n->b, table, out);
      return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Expression

Expression::Expression(NodePtr root, std::shared_ptr<const SymbolTable> table)
    : root_(std::move(root)), table_(std::move(table)) {}

Expression Expression::parse(std::string_view text, std::shared_ptr<const SymbolTable> table) {
  Parser parser(text, *table);
  return Expression(parser.parseAll(), std::move(table));
}

Expression Expression::constant(double value, std::shared_ptr<const SymbolTable> table) {
  return Expression(mkConst(value), std::move(table));
}

double Expression::eval(const Bindings& bindings) const {
  if (bindings.values().size() != table_->slotCount())
    throw Error("bindings built for a different symbol table");
  return evalNode(*root_, bindings);
}

Expression Expression::diff(std::string_view var) const {
  int slot = table_->findSlot(var);
  if (slot < 0 || table_->kindOf(slot) == VarKind::Parameter)
    throw UnknownVariable(std::string(var));
  return Expression(diffNode(root_, slot), table_);
}

std::string Expression::str() const { return printWith(*root_, *table_).text; }

bool Expression::isZeroLiteral() const {
  return root_->kind == Node::Kind::Constant && root_->value == 0.0;
}

bool Expression::structurallyEqual(const Expression& other) const {
  return nodesEqual(root_, other.root_);
}

std::vector<std::string> Expression::variableNames() const {
  std::set<std::string> names;
  collectNames(root_, *table_, names);
  return {names.begin(), names.end()};
}

}  // namespace nhdyn
