#include <cmath>
#include <type_traits>

#include "planefield/expr.hpp"

namespace planefield {

namespace {

// Integer-valued literal exponents use the integer power rule, which is
// defined for any base; everything else needs a positive base.
bool integer_literal(const ExprNode& n, long& out) {
  if (n.kind != NodeKind::Number) return false;
  if (n.number != std::floor(n.number) || std::fabs(n.number) > 1e9) return false;
  out = static_cast<long>(n.number);
  return true;
}

double smoothstep_of(double a, double b, double x) { return smoothstep(a, b, x); }
Jet1 smoothstep_of(const Jet1& a, const Jet1& b, const Jet1& x) { return smoothstep(a, b, x); }

template <typename S>
S eval_node(const ExprNode& n, const std::array<S, 3>& args) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  const auto& c = n.children;
  switch (n.kind) {
    case NodeKind::Number:
    case NodeKind::Constant: return S(n.number);
    case NodeKind::Coord: return args[static_cast<std::size_t>(n.coord)];
    case NodeKind::Neg: return -eval_node(*c[0], args);
    case NodeKind::Add: return eval_node(*c[0], args) + eval_node(*c[1], args);
    case NodeKind::Sub: return eval_node(*c[0], args) - eval_node(*c[1], args);
    case NodeKind::Mul: return eval_node(*c[0], args) * eval_node(*c[1], args);
    case NodeKind::Div: {
      const S den = eval_node(*c[1], args);
      if (value_of(den) == 0.0) throw DomainError("/", 0.0);
      return eval_node(*c[0], args) / den;
    }
    case NodeKind::Pow: {
      const S base = eval_node(*c[0], args);
      long k = 0;
      if (integer_literal(*c[1], k)) {
        if (k < 0 && value_of(base) == 0.0) throw DomainError("^", 0.0);
        return pow_int<S>(base, k);
      }
      if (!(value_of(base) > 0.0)) throw DomainError("^", value_of(base));
      return pow_real(base, eval_node(*c[1], args));
    }
    case NodeKind::Call: {
      switch (n.function) {
        case Function::Sin: return sin(eval_node(*c[0], args));
        case Function::Cos: return cos(eval_node(*c[0], args));
        case Function::Exp: return exp(eval_node(*c[0], args));
        case Function::Sqrt: {
          const S a = eval_node(*c[0], args);
          if (value_of(a) < 0.0) throw DomainError("sqrt", value_of(a));
          const S r = sqrt(a);
          if constexpr (std::is_same_v<S, Jet1>) {
            for (double g : r.grad)
              if (!std::isfinite(g)) throw DomainError("sqrt", value_of(a));
          }
          return r;
        }
        case Function::Smoothstep:
          return smoothstep_of(eval_node(*c[0], args), eval_node(*c[1], args),
                               eval_node(*c[2], args));
      }
    }
  }
  return S(0.0);
}

}  // namespace

double Expr::eval(const Point& p) const { return eval_node<double>(*root_, p); }

Jet1 Expr::eval_jet(const Point& p) const { return eval_node<Jet1>(*root_, seed(p)); }

Jet1 Expr::eval_composed(const JetVec3& args) const { return eval_node<Jet1>(*root_, args); }

}  // namespace planefield
