#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "planefield/errors.hpp"
#include "planefield/jet.hpp"

namespace planefield {

using CoordNames = std::array<std::string, 3>;

enum class NodeKind { Number, Coord, Constant, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Function { Sin, Cos, Exp, Sqrt, Smoothstep };

struct ExprNode {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;  // Number literal, or the value of a named Constant
  int coord = -1;       // Coord slot
  Function function = Function::Sin;
  std::string name;     // Constant / Call name
  std::vector<std::shared_ptr<const ExprNode>> children;
};

/// Immutable smooth scalar expression over three chart coordinates.
///
/// Grammar (whitespace-insensitive):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | power
///   power  := atom ('^' factor)?
///   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
/// so '^' binds tighter than unary minus ("-x^2" is -(x^2)) and is
/// right-associative. Subtrees made only of numeric literals are folded.
class Expr {
 public:
  /// Throws SyntaxError, UnknownIdentifier or ArityError.
  static Expr parse(std::string_view text, const CoordNames& coords);
  static Expr number(double value, const CoordNames& coords);

  const ExprNode& root() const { return *root_; }
  const CoordNames& coords() const { return coords_; }

  double eval(const Point& p) const;
  /// Value and exact partials in the chart coordinates.
  Jet1 eval_jet(const Point& p) const;
  /// Evaluates with jet-valued coordinates (composition / pullback).
  Jet1 eval_composed(const JetVec3& args) const;

  /// Normal form with minimal parentheses and shortest round-trip numbers.
  std::string print() const;

  /// True when the expression does not reference any coordinate.
  bool is_constant() const;

 private:
  Expr(std::shared_ptr<const ExprNode> root, CoordNames coords)
      : root_(std::move(root)), coords_(std::move(coords)) {}

  std::shared_ptr<const ExprNode> root_;
  CoordNames coords_;
};

/// Parses and evaluates a coordinate-free expression ("2*pi").
double eval_constant(std::string_view text);

std::string format_number(double x);

}  // namespace planefield
