#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>

#include "planefield/expr.hpp"

namespace planefield {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      while (i < s.size() && is_digit(s[i])) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && is_digit(s[j])) {
          i = j;
          while (i < s.size() && is_digit(s[i])) ++i;
        }
      }
      std::string text(s.substr(start, i - start));
      out.push_back({Tok::Number, start, text, std::strtod(text.c_str(), nullptr)});
      continue;
    }
    if (is_ident_start(c)) {
      while (i < s.size() && (is_ident_start(s[i]) || is_digit(s[i]))) ++i;
      out.push_back({Tok::Ident, start, std::string(s.substr(start, i - start))});
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
      case ',': k = Tok::Comma; break;
      default:
        throw SyntaxError(start, {"number", "identifier", "operator", "'('"},
                          "'" + std::string(1, c) + "'");
    }
    out.push_back({k, start, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

using NodePtr = std::shared_ptr<const ExprNode>;

struct FunctionInfo {
  std::string_view name;
  Function fn;
  std::size_t arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Function::Sin, 1},   {"cos", Function::Cos, 1},
    {"exp", Function::Exp, 1},   {"sqrt", Function::Sqrt, 1},
    {"smoothstep", Function::Smoothstep, 3},
};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return &f;
  return nullptr;
}

NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Number;
  n->number = v;
  return n;
}

bool all_numbers(const std::vector<NodePtr>& kids) {
  for (const auto& k : kids)
    if (k->kind != NodeKind::Number) return false;
  return true;
}

// Folds a node whose children are all literals. Leaves it alone if the
// result would not be finite or the function would raise, so evaluation
// reports the error with its usual context.
NodePtr fold(NodePtr node) {
  if (node->children.empty() || !all_numbers(node->children)) return node;
  double v = 0.0;
  const auto& c = node->children;
  try {
    switch (node->kind) {
      case NodeKind::Neg: v = -c[0]->number; break;
      case NodeKind::Add: v = c[0]->number + c[1]->number; break;
      case NodeKind::Sub: v = c[0]->number - c[1]->number; break;
      case NodeKind::Mul: v = c[0]->number * c[1]->number; break;
      case NodeKind::Div:
        if (c[1]->number == 0.0) return node;
        v = c[0]->number / c[1]->number;
        break;
      case NodeKind::Pow: {
        const double b = c[0]->number, e = c[1]->number;
        if (e != std::floor(e) && b <= 0.0) return node;
        v = std::pow(b, e);
        break;
      }
      case NodeKind::Call:
        switch (node->function) {
          case Function::Sin: v = std::sin(c[0]->number); break;
          case Function::Cos: v = std::cos(c[0]->number); break;
          case Function::Exp: v = std::exp(c[0]->number); break;
          case Function::Sqrt:
            if (c[0]->number < 0.0) return node;
            v = std::sqrt(c[0]->number);
            break;
          case Function::Smoothstep:
            v = smoothstep(c[0]->number, c[1]->number, c[2]->number);
            break;
        }
        break;
      default: return node;
    }
  } catch (const DomainError&) {
    return node;
  }
  if (!std::isfinite(v)) return node;
  return make_number(v);
}

NodePtr make_node(NodeKind kind, std::vector<NodePtr> kids) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->children = std::move(kids);
  return fold(n);
}

class Parser {
 public:
  Parser(std::string_view text, const CoordNames& coords)
      : tokens_(lex(text)), coords_(coords) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    if (peek().kind != Tok::End) fail({"operator", "end of input"});
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(peek().pos, std::move(expected), describe(peek()));
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const NodeKind k = next().kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
      lhs = make_node(k, {lhs, parse_term()});
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const NodeKind k = next().kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
      lhs = make_node(k, {lhs, parse_factor()});
    }
    return lhs;
  }

  NodePtr parse_factor() {
    if (peek().kind == Tok::Minus) {
      next();
      return make_node(NodeKind::Neg, {parse_factor()});
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (peek().kind == Tok::Caret) {
      next();
      return make_node(NodeKind::Pow, {base, parse_factor()});
    }
    return base;
  }

  NodePtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        return make_number(t.number);
      }
      case Tok::LParen: {
        next();
        NodePtr inner = parse_expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        const Token id = next();
        if (peek().kind == Tok::LParen) return parse_call(id);
        return resolve(id);
      }
      default: fail({"number", "identifier", "'('", "'-'"});
    }
  }

  NodePtr parse_call(const Token& id) {
    const FunctionInfo* info = find_function(id.text);
    if (!info) throw UnknownIdentifier(id.text, id.pos);
    next();  // '('
    std::vector<NodePtr> args;
    args.push_back(parse_expr());
    while (peek().kind == Tok::Comma) {
      next();
      args.push_back(parse_expr());
    }
    expect(Tok::RParen, "')'");
    if (args.size() != info->arity) throw ArityError(id.text, info->arity, args.size(), id.pos);
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Call;
    n->function = info->fn;
    n->name = std::string(info->name);
    n->children = std::move(args);
    return fold(n);
  }

  NodePtr resolve(const Token& id) {
    for (int k = 0; k < 3; ++k) {
      if (coords_[static_cast<std::size_t>(k)] == id.text) {
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Coord;
        n->coord = k;
        return n;
      }
    }
    if (id.text == "pi") {
      auto n = std::make_shared<ExprNode>();
      n->kind = NodeKind::Constant;
      n->name = "pi";
      n->number = std::numbers::pi;
      return n;
    }
    throw UnknownIdentifier(id.text, id.pos);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      if (kind == Tok::RParen)
        fail({what, "','", "operator"});
      fail({what});
    }
    next();
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const CoordNames& coords_;
};

// Printing precedence levels.
int precedence(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    case NodeKind::Number: return n.number < 0.0 || std::signbit(n.number) ? 3 : 5;
    default: return 5;
  }
}

void print_node(const ExprNode& n, const CoordNames& coords, std::string& out);

void print_child(const ExprNode& child, bool parens, const CoordNames& coords, std::string& out) {
  if (parens) out += '(';
  print_node(child, coords, out);
  if (parens) out += ')';
}

void print_node(const ExprNode& n, const CoordNames& coords, std::string& out) {
  const auto& c = n.children;
  switch (n.kind) {
    case NodeKind::Number: out += format_number(n.number); return;
    case NodeKind::Coord: out += coords[static_cast<std::size_t>(n.coord)]; return;
    case NodeKind::Constant: out += n.name; return;
    case NodeKind::Neg:
      out += '-';
      print_child(*c[0], precedence(*c[0]) < 3, coords, out);
      return;
    case NodeKind::Call:
      out += n.name;
      out += '(';
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ", ";
        print_node(*c[i], coords, out);
      }
      out += ')';
      return;
    case NodeKind::Pow:
      print_child(*c[0], precedence(*c[0]) <= 4, coords, out);
      out += '^';
      print_child(*c[1], precedence(*c[1]) < 3, coords, out);
      return;
    default: break;
  }
  const int p = precedence(n);
  const char* op = n.kind == NodeKind::Add   ? " + "
                   : n.kind == NodeKind::Sub ? " - "
                   : n.kind == NodeKind::Mul ? "*"
                                             : "/";
  // A leading unary minus on the left operand is fine at any level >= its own.
  print_child(*c[0], precedence(*c[0]) < p, coords, out);
  out += op;
  print_child(*c[1], precedence(*c[1]) <= p, coords, out);
}

bool references_coords(const ExprNode& n) {
  if (n.kind == NodeKind::Coord) return true;
  for (const auto& k : n.children)
    if (references_coords(*k)) return true;
  return false;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, end);
}

Expr Expr::parse(std::string_view text, const CoordNames& coords) {
  return Expr(Parser(text, coords).parse_all(), coords);
}

Expr Expr::number(double value, const CoordNames& coords) { return Expr(make_number(value), coords); }

std::string Expr::print() const {
  std::string out;
  print_node(*root_, coords_, out);
  return out;
}

bool Expr::is_constant() const { return !references_coords(*root_); }

double eval_constant(std::string_view text) {
  const Expr e = Expr::parse(text, CoordNames{"", "", ""});
  return e.eval(Point{0.0, 0.0, 0.0});
}

}  // namespace planefield
