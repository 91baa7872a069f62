#include "hysim/eval.hpp"

#include <cmath>

#include "hysim/errors.hpp"

namespace hysim {

std::optional<double> StateScope::lookup(std::string_view name) const {
  const auto it = state_.find(name);
  if (it == state_.end()) return std::nullopt;
  return it->second;
}

namespace {

double checked(double v, const Expr& e, const char* what) {
  if (!std::isfinite(v)) throw EvalError(e.pos, std::string("non-finite result of ") + what);
  return v;
}

double real_of(const Expr& e, const Scope& scope);
bool bool_of(const Expr& e, const Scope& scope);

double real_of(const Expr& e, const Scope& scope) {
  if (const auto* n = std::get_if<Expr::Number>(&e.node)) return n->value;
  if (const auto* v = std::get_if<Expr::Var>(&e.node)) {
    const auto value = scope.lookup(v->name);
    if (!value) throw UndefinedVariable(e.pos, v->name);
    return *value;
  }
  if (const auto* u = std::get_if<Expr::Unary>(&e.node)) {
    const double x = real_of(*u->operand, scope);
    if (u->op == UnaryOp::Neg) return -x;
    if (u->op == UnaryOp::Sqrt) {
      if (x < 0) throw EvalError(e.pos, "sqrt of negative value " + std::to_string(x));
      return std::sqrt(x);
    }
  }
  if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
    const double l = real_of(*b->lhs, scope);
    const double r = real_of(*b->rhs, scope);
    switch (b->op) {
      case BinaryOp::Add: return checked(l + r, e, "'+'");
      case BinaryOp::Sub: return checked(l - r, e, "'-'");
      case BinaryOp::Mul: return checked(l * r, e, "'*'");
      case BinaryOp::Div:
        if (r == 0.0) throw EvalError(e.pos, "division by zero");
        return checked(l / r, e, "'/'");
      default: break;
    }
  }
  throw EvalError(e.pos, "expected a real-valued expression");
}

bool bool_of(const Expr& e, const Scope& scope) {
  if (const auto* b = std::get_if<Expr::Bool>(&e.node)) return b->value;
  if (const auto* u = std::get_if<Expr::Unary>(&e.node); u && u->op == UnaryOp::Not) {
    return !bool_of(*u->operand, scope);
  }
  if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
    switch (b->op) {
      case BinaryOp::And: return bool_of(*b->lhs, scope) && bool_of(*b->rhs, scope);
      case BinaryOp::Or: return bool_of(*b->lhs, scope) || bool_of(*b->rhs, scope);
      default: break;
    }
    const double l = real_of(*b->lhs, scope);
    const double r = real_of(*b->rhs, scope);
    switch (b->op) {
      case BinaryOp::Eq: return l == r;
      case BinaryOp::Ne: return l != r;
      case BinaryOp::Lt: return l < r;
      case BinaryOp::Le: return l <= r;
      case BinaryOp::Gt: return l > r;
      case BinaryOp::Ge: return l >= r;
      default: break;
    }
  }
  throw EvalError(e.pos, "expected a boolean expression");
}

}  // namespace

Value eval_expr(const Expr& e, const Scope& scope) {
  if (e.type() == ValueType::Bool) return bool_of(e, scope);
  return real_of(e, scope);
}

double eval_real(const Expr& e, const Scope& scope) { return real_of(e, scope); }
bool eval_bool(const Expr& e, const Scope& scope) { return bool_of(e, scope); }

}  // namespace hysim
