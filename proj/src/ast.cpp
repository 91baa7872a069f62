#include "hysim/ast.hpp"

#include <algorithm>
#include <set>

namespace hysim {

std::string_view op_symbol(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Not: return "!";
    case UnaryOp::Sqrt: return "sqrt";
  }
  return "?";
}

std::string_view op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool is_boolean_op(BinaryOp op) { return op >= BinaryOp::Eq; }

bool ptr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return *a == *b;
}

bool ptr_equal(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return a == b;
  return *a == *b;
}

}  // namespace

ValueType Expr::type() const {
  return std::visit(
      overloaded{
          [](const Number&) { return ValueType::Real; },
          [](const Bool&) { return ValueType::Bool; },
          [](const Var&) { return ValueType::Real; },
          [](const Unary& u) { return u.op == UnaryOp::Not ? ValueType::Bool : ValueType::Real; },
          [](const Binary& b) { return is_boolean_op(b.op) ? ValueType::Bool : ValueType::Real; },
      },
      node);
}

ExprPtr make_number(double value, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{Expr::Number{value}, pos});
}
ExprPtr make_bool(bool value, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{Expr::Bool{value}, pos});
}
ExprPtr make_var(std::string name, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{Expr::Var{std::move(name)}, pos});
}
ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{Expr::Unary{op, std::move(operand)}, pos});
}
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{Expr::Binary{op, std::move(lhs), std::move(rhs)}, pos});
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Expr::Number& x) { return x.value == std::get<Expr::Number>(b.node).value; },
          [&](const Expr::Bool& x) { return x.value == std::get<Expr::Bool>(b.node).value; },
          [&](const Expr::Var& x) { return x.name == std::get<Expr::Var>(b.node).name; },
          [&](const Expr::Unary& x) {
            const auto& y = std::get<Expr::Unary>(b.node);
            return x.op == y.op && ptr_equal(x.operand, y.operand);
          },
          [&](const Expr::Binary& x) {
            const auto& y = std::get<Expr::Binary>(b.node);
            return x.op == y.op && ptr_equal(x.lhs, y.lhs) && ptr_equal(x.rhs, y.rhs);
          },
      },
      a.node);
}

StmtPtr make_stmt(decltype(Stmt::node) node, SourcePos pos) {
  return std::make_shared<const Stmt>(Stmt{std::move(node), pos});
}

StmtPtr make_seq(std::vector<StmtPtr> body, SourcePos pos) {
  return make_stmt(Stmt::Seq{std::move(body)}, pos);
}

bool operator==(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Stmt::Assign& x) {
            const auto& y = std::get<Stmt::Assign>(b.node);
            return x.var == y.var && ptr_equal(x.rhs, y.rhs);
          },
          [&](const Stmt::AssignVariants& x) {
            const auto& y = std::get<Stmt::AssignVariants>(b.node);
            return x.var == y.var && x.values == y.values;
          },
          [&](const Stmt::Seq& x) {
            const auto& y = std::get<Stmt::Seq>(b.node);
            return std::equal(x.body.begin(), x.body.end(), y.body.begin(), y.body.end(),
                              [](const StmtPtr& l, const StmtPtr& r) { return ptr_equal(l, r); });
          },
          [&](const Stmt::If& x) {
            const auto& y = std::get<Stmt::If>(b.node);
            return ptr_equal(x.guard, y.guard) && ptr_equal(x.then_branch, y.then_branch) &&
                   ptr_equal(x.else_branch, y.else_branch);
          },
          [&](const Stmt::While& x) {
            const auto& y = std::get<Stmt::While>(b.node);
            return ptr_equal(x.guard, y.guard) && ptr_equal(x.body, y.body);
          },
          [&](const Stmt::Ode& x) {
            const auto& y = std::get<Stmt::Ode>(b.node);
            if (x.equations.size() != y.equations.size()) return false;
            for (std::size_t i = 0; i < x.equations.size(); ++i) {
              if (x.equations[i].var != y.equations[i].var ||
                  !ptr_equal(x.equations[i].derivative, y.equations[i].derivative)) {
                return false;
              }
            }
            if (x.bound.index() != y.bound.index()) return false;
            if (const auto* f = std::get_if<Stmt::Ode::For>(&x.bound)) {
              return ptr_equal(f->duration, std::get<Stmt::Ode::For>(y.bound).duration);
            }
            return ptr_equal(std::get<Stmt::Ode::Until>(x.bound).condition,
                             std::get<Stmt::Ode::Until>(y.bound).condition);
          },
      },
      a.node);
}

const std::vector<StmtPtr>& Program::statements() const {
  return std::get<Stmt::Seq>(body->node).body;
}

bool structurally_equal(const Program& a, const Program& b) { return ptr_equal(a.body, b.body); }

namespace {

void collect(const Stmt& s, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const Stmt::Assign& x) { out.insert(x.var); },
                 [&](const Stmt::AssignVariants& x) { out.insert(x.var); },
                 [&](const Stmt::Seq& x) {
                   for (const auto& c : x.body) collect(*c, out);
                 },
                 [&](const Stmt::If& x) {
                   collect(*x.then_branch, out);
                   collect(*x.else_branch, out);
                 },
                 [&](const Stmt::While& x) { collect(*x.body, out); },
                 [&](const Stmt::Ode& x) {
                   for (const auto& eq : x.equations) out.insert(eq.var);
                 },
             },
             s.node);
}

}  // namespace

std::vector<std::string> assigned_variables(const Program& program) {
  std::set<std::string> names;
  if (program.body) collect(*program.body, names);
  return {names.begin(), names.end()};
}

}  // namespace hysim
