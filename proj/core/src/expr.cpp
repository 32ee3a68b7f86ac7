#include "kcoshj/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "kcoshj/dual.hpp"
#include "kcoshj/errors.hpp"

namespace kcoshj {

double ParamSet::get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw ValidationError("unknown parameter '" + name + "'");
  return it->second;
}

std::vector<std::string> ParamSet::names() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [name, value] : values_) out.push_back(name);
  return out;
}

std::vector<double> ParamSet::values_for(std::span<const std::string> names) const {
  std::vector<double> out;
  out.reserve(names.size());
  for (const auto& name : names) out.push_back(get(name));
  return out;
}

enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class FuncKind { Sin, Cos, Exp, Log, Sqrt, Abs, Asin };

struct ExprNode {
  enum class Kind { Number, Coord, Param, Neg, Binary, Call };

  Kind kind;
  double number = 0.0;
  int index = -1;    // Coord: flat coordinate index; Param: parameter slot
  std::string name;  // identifier spelling, kept for printing
  BinOp op = BinOp::Add;
  FuncKind func = FuncKind::Sin;
  std::shared_ptr<const ExprNode> a;
  std::shared_ptr<const ExprNode> b;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::Sin: return "sin";
    case FuncKind::Cos: return "cos";
    case FuncKind::Exp: return "exp";
    case FuncKind::Log: return "log";
    case FuncKind::Sqrt: return "sqrt";
    case FuncKind::Abs: return "abs";
    case FuncKind::Asin: return "asin";
  }
  return "?";
}

bool lookup_func(std::string_view name, FuncKind& out) {
  if (name == "sin") out = FuncKind::Sin;
  else if (name == "cos") out = FuncKind::Cos;
  else if (name == "exp") out = FuncKind::Exp;
  else if (name == "log") out = FuncKind::Log;
  else if (name == "sqrt") out = FuncKind::Sqrt;
  else if (name == "abs") out = FuncKind::Abs;
  else if (name == "asin") out = FuncKind::Asin;
  else return false;
  return true;
}

struct Token {
  enum class Kind { Number, Ident, Op, LParen, RParen, End };
  Kind kind = Kind::End;
  double number = 0.0;
  std::string_view text;
  char op = 0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_ = Token{};
    current_.pos = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::End;
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) ||
                                    text_[end] == '_')) {
        ++end;
      }
      current_.kind = Token::Kind::Ident;
      current_.text = text_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        current_.kind = Token::Kind::Op;
        current_.op = c;
        ++pos_;
        return;
      case '(':
        current_.kind = Token::Kind::LParen;
        ++pos_;
        return;
      case ')':
        current_.kind = Token::Kind::RParen;
        ++pos_;
        return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
  }

  void lex_number() {
    std::size_t end = pos_;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp = end + 1;
      if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
      if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
        ++exp;
        while (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) ++exp;
        end = exp;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, value);
    if (ec != std::errc() || ptr != text_.data() + end) {
      throw ParseError("malformed number literal", pos_);
    }
    current_.kind = Token::Kind::Number;
    current_.number = value;
    pos_ = end;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_;
};

class Parser {
 public:
  Parser(std::string_view text, const Dimensions& dims, std::span<const std::string> params)
      : lexer_(text), dims_(dims), params_(params) {}

  NodePtr run() {
    NodePtr node = parse_sum();
    const Token& t = lexer_.peek();
    if (t.kind != Token::Kind::End) {
      throw ParseError("unexpected trailing input", t.pos);
    }
    return node;
  }

 private:
  NodePtr parse_sum() {
    NodePtr node = parse_product();
    while (lexer_.peek().kind == Token::Kind::Op &&
           (lexer_.peek().op == '+' || lexer_.peek().op == '-')) {
      const char op = lexer_.take().op;
      NodePtr rhs = parse_product();
      node = make_binary(op == '+' ? BinOp::Add : BinOp::Sub, node, rhs);
    }
    return node;
  }

  NodePtr parse_product() {
    NodePtr node = parse_factor();
    while (lexer_.peek().kind == Token::Kind::Op &&
           (lexer_.peek().op == '*' || lexer_.peek().op == '/')) {
      const char op = lexer_.take().op;
      NodePtr rhs = parse_factor();
      node = make_binary(op == '*' ? BinOp::Mul : BinOp::Div, node, rhs);
    }
    return node;
  }

  // factor := '-' factor | power; power := atom ('^' factor)?
  // so '^' binds tighter than unary minus and is right-associative.
  NodePtr parse_factor() {
    if (lexer_.peek().kind == Token::Kind::Op && lexer_.peek().op == '-') {
      lexer_.take();
      auto node = std::make_shared<ExprNode>();
      node->kind = ExprNode::Kind::Neg;
      node->a = parse_factor();
      return node;
    }
    NodePtr base = parse_atom();
    if (lexer_.peek().kind == Token::Kind::Op && lexer_.peek().op == '^') {
      lexer_.take();
      NodePtr exponent = parse_factor();
      return make_binary(BinOp::Pow, base, exponent);
    }
    return base;
  }

  NodePtr parse_atom() {
    const Token t = lexer_.take();
    switch (t.kind) {
      case Token::Kind::Number: {
        auto node = std::make_shared<ExprNode>();
        node->kind = ExprNode::Kind::Number;
        node->number = t.number;
        return node;
      }
      case Token::Kind::Ident: {
        if (lexer_.peek().kind == Token::Kind::LParen) return parse_call(t);
        return resolve_name(t);
      }
      case Token::Kind::LParen: {
        NodePtr inner = parse_sum();
        const Token close = lexer_.take();
        if (close.kind != Token::Kind::RParen) {
          throw ParseError("expected ')'", close.pos);
        }
        return inner;
      }
      default:
        throw ParseError("expected a number, a name or '('", t.pos);
    }
  }

  NodePtr parse_call(const Token& name) {
    FuncKind func;
    if (!lookup_func(name.text, func)) {
      throw ParseError("unknown function '" + std::string(name.text) + "'", name.pos);
    }
    lexer_.take();  // '('
    NodePtr arg = parse_sum();
    const Token close = lexer_.take();
    if (close.kind != Token::Kind::RParen) {
      throw ParseError("expected ')' closing the argument of '" + std::string(name.text) + "'",
                       close.pos);
    }
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprNode::Kind::Call;
    node->func = func;
    node->a = arg;
    return node;
  }

  NodePtr resolve_name(const Token& t) {
    auto node = std::make_shared<ExprNode>();
    node->name = std::string(t.text);
    const int coord = coordinate_index(dims_, t.text);
    if (coord >= 0) {
      node->kind = ExprNode::Kind::Coord;
      node->index = coord;
      return node;
    }
    const auto it = std::find(params_.begin(), params_.end(), t.text);
    if (it != params_.end()) {
      node->kind = ExprNode::Kind::Param;
      node->index = static_cast<int>(it - params_.begin());
      return node;
    }
    throw ParseError("unknown identifier '" + std::string(t.text) + "'", t.pos);
  }

  static NodePtr make_binary(BinOp op, NodePtr a, NodePtr b) {
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprNode::Kind::Binary;
    node->op = op;
    node->a = std::move(a);
    node->b = std::move(b);
    return node;
  }

  Lexer lexer_;
  const Dimensions& dims_;
  std::span<const std::string> params_;
};

void collect_coords(const ExprNode& node, std::vector<bool>& mask, int& max_coord) {
  switch (node.kind) {
    case ExprNode::Kind::Coord:
      if (node.index >= static_cast<int>(mask.size())) mask.resize(node.index + 1, false);
      mask[node.index] = true;
      max_coord = std::max(max_coord, node.index);
      break;
    case ExprNode::Kind::Neg:
    case ExprNode::Kind::Call:
      collect_coords(*node.a, mask, max_coord);
      break;
    case ExprNode::Kind::Binary:
      collect_coords(*node.a, mask, max_coord);
      collect_coords(*node.b, mask, max_coord);
      break;
    default:
      break;
  }
}

template <class T>
T eval_node(const ExprNode& node, std::span<const T> coords, std::span<const T> params) {
  switch (node.kind) {
    case ExprNode::Kind::Number:
      return T(node.number);
    case ExprNode::Kind::Coord:
      return coords[static_cast<std::size_t>(node.index)];
    case ExprNode::Kind::Param:
      return params[static_cast<std::size_t>(node.index)];
    case ExprNode::Kind::Neg:
      return -eval_node(*node.a, coords, params);
    case ExprNode::Kind::Binary: {
      const T a = eval_node(*node.a, coords, params);
      const T b = eval_node(*node.b, coords, params);
      switch (node.op) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div: return checked_div(a, b);
        case BinOp::Pow: return d_pow(a, b);
      }
      break;
    }
    case ExprNode::Kind::Call: {
      const T a = eval_node(*node.a, coords, params);
      switch (node.func) {
        case FuncKind::Sin: return d_sin(a);
        case FuncKind::Cos: return d_cos(a);
        case FuncKind::Exp: return d_exp(a);
        case FuncKind::Log: return d_log(a);
        case FuncKind::Sqrt: return d_sqrt(a);
        case FuncKind::Abs: return d_abs(a);
        case FuncKind::Asin: return d_asin(a);
      }
      break;
    }
  }
  throw EvalError("corrupt expression tree");
}

// Print levels: sums 1, products 2, negation 3, powers 4, atoms 5.
int print_level(const ExprNode& node) {
  switch (node.kind) {
    case ExprNode::Kind::Binary:
      switch (node.op) {
        case BinOp::Add:
        case BinOp::Sub: return 1;
        case BinOp::Mul:
        case BinOp::Div: return 2;
        case BinOp::Pow: return 4;
      }
      return 1;
    case ExprNode::Kind::Neg: return 3;
    default: return 5;
  }
}

void print_node(const ExprNode& node, std::string& out);

void print_child(const ExprNode& child, int min_level, std::string& out) {
  if (print_level(child) < min_level) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const ExprNode& node, std::string& out) {
  switch (node.kind) {
    case ExprNode::Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", node.number);
      out += buf;
      return;
    }
    case ExprNode::Kind::Coord:
    case ExprNode::Kind::Param:
      out += node.name;
      return;
    case ExprNode::Kind::Neg:
      out += '-';
      print_child(*node.a, 3, out);
      return;
    case ExprNode::Kind::Binary:
      switch (node.op) {
        case BinOp::Add:
          print_child(*node.a, 1, out);
          out += " + ";
          print_child(*node.b, 2, out);
          return;
        case BinOp::Sub:
          print_child(*node.a, 1, out);
          out += " - ";
          print_child(*node.b, 2, out);
          return;
        case BinOp::Mul:
          print_child(*node.a, 2, out);
          out += '*';
          print_child(*node.b, 3, out);
          return;
        case BinOp::Div:
          print_child(*node.a, 2, out);
          out += '/';
          print_child(*node.b, 3, out);
          return;
        case BinOp::Pow:
          print_child(*node.a, 5, out);
          out += '^';
          print_child(*node.b, 3, out);
          return;
      }
      return;
    case ExprNode::Kind::Call:
      out += func_name(node.func);
      out += '(';
      print_node(*node.a, out);
      out += ')';
      return;
  }
}

}  // namespace

Expr::Expr(std::shared_ptr<const ExprNode> root,
           std::shared_ptr<const std::vector<std::string>> params, std::vector<bool> coord_mask,
           int max_coord)
    : root_(std::move(root)),
      params_(std::move(params)),
      coord_mask_(std::move(coord_mask)),
      max_coord_(max_coord) {}

Expr Expr::parse(std::string_view text, const Dimensions& dims,
                 std::span<const std::string> param_names) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError("empty expression", 0);
  }
  for (std::size_t i = 0; i < param_names.size(); ++i) {
    if (coordinate_index(dims, param_names[i]) >= 0) {
      throw ValidationError("parameter name '" + param_names[i] + "' shadows a coordinate");
    }
    for (std::size_t j = i + 1; j < param_names.size(); ++j) {
      if (param_names[i] == param_names[j]) {
        throw ValidationError("duplicate parameter name '" + param_names[i] + "'");
      }
    }
  }
  Parser parser(text, dims, param_names);
  NodePtr root = parser.run();
  std::vector<bool> mask;
  int max_coord = -1;
  collect_coords(*root, mask, max_coord);
  auto params = std::make_shared<std::vector<std::string>>(param_names.begin(), param_names.end());
  return Expr(std::move(root), std::move(params), std::move(mask), max_coord);
}

std::string Expr::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

namespace {

void check_sizes(std::span<const double> coords, int max_coord, std::size_t param_count,
                 std::size_t params_given) {
  if (static_cast<int>(coords.size()) <= max_coord) {
    throw ValidationError("coordinate environment too short for expression");
  }
  if (params_given != param_count) {
    throw ValidationError("parameter value count does not match bound parameter names");
  }
}

}  // namespace

double Expr::eval(std::span<const double> coords, std::span<const double> params) const {
  check_sizes(coords, max_coord_, params_->size(), params.size());
  return eval_node<double>(*root_, coords, params);
}

double Expr::partial(std::span<const double> coords, std::span<const double> params,
                     int coord) const {
  check_sizes(coords, max_coord_, params_->size(), params.size());
  if (coord < 0) throw std::out_of_range("negative coordinate index");
  if (!depends_on(coord)) return 0.0;
  std::vector<Dual<double>> c(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) c[i] = Dual<double>(coords[i]);
  c[static_cast<std::size_t>(coord)].der = 1.0;
  std::vector<Dual<double>> p(params.begin(), params.end());
  return eval_node<Dual<double>>(*root_, c, p).der;
}

double Expr::partial2(std::span<const double> coords, std::span<const double> params, int c1,
                      int c2) const {
  check_sizes(coords, max_coord_, params_->size(), params.size());
  if (c1 < 0 || c2 < 0) throw std::out_of_range("negative coordinate index");
  if (!depends_on(c1) || !depends_on(c2)) return 0.0;
  using D2 = Dual<Dual<double>>;
  std::vector<D2> c(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    c[i] = D2(Dual<double>(coords[i]));
  }
  // Outer epsilon seeds c1, inner epsilon seeds c2; the mixed term is the
  // second partial.
  c[static_cast<std::size_t>(c1)].der.val += 1.0;
  c[static_cast<std::size_t>(c2)].val.der += 1.0;
  std::vector<D2> p;
  p.reserve(params.size());
  for (double v : params) p.emplace_back(Dual<double>(v));
  return eval_node<D2>(*root_, c, p).der.der;
}

bool Expr::depends_on(int coord) const {
  return coord >= 0 && coord < static_cast<int>(coord_mask_.size()) && coord_mask_[coord];
}

}  // namespace kcoshj
