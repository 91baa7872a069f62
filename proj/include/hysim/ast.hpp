#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hysim/errors.hpp"

namespace hysim {

enum class ValueType { Real, Bool };

enum class UnaryOp { Neg, Not, Sqrt };

enum class BinaryOp {
  Add, Sub, Mul, Div,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or,
};

std::string_view op_symbol(UnaryOp op);
std::string_view op_symbol(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Trees are immutable once built, so sharing subtrees across threads and
// across instantiated programs is safe.
struct Expr {
  struct Number {
    double value;
  };
  struct Bool {
    bool value;
  };
  struct Var {
    std::string name;
  };
  struct Unary {
    UnaryOp op;
    ExprPtr operand;
  };
  struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };

  std::variant<Number, Bool, Var, Unary, Binary> node;
  SourcePos pos;

  ValueType type() const;
};

ExprPtr make_number(double value, SourcePos pos = {});
ExprPtr make_bool(bool value, SourcePos pos = {});
ExprPtr make_var(std::string name, SourcePos pos = {});
ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourcePos pos = {});
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});

/// Structural equality; source positions are ignored.
bool operator==(const Expr& a, const Expr& b);

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct OdeEquation {
  std::string var;
  ExprPtr derivative;
  SourcePos pos;
};

struct Stmt {
  struct Assign {
    std::string var;
    ExprPtr rhs;
  };
  /// `v := [a, b, ...]` or `v := [lo..hi]`: one run per value.
  struct AssignVariants {
    std::string var;
    std::vector<double> values;
  };
  struct Seq {
    std::vector<StmtPtr> body;
  };
  struct If {
    ExprPtr guard;
    StmtPtr then_branch;
    StmtPtr else_branch;
  };
  struct While {
    ExprPtr guard;
    StmtPtr body;
  };
  struct Ode {
    struct For {
      ExprPtr duration;
    };
    /// Evolve until the condition becomes true.
    struct Until {
      ExprPtr condition;
    };
    std::vector<OdeEquation> equations;
    std::variant<For, Until> bound;
  };

  std::variant<Assign, AssignVariants, Seq, If, While, Ode> node;
  SourcePos pos;
};

StmtPtr make_stmt(decltype(Stmt::node) node, SourcePos pos = {});
StmtPtr make_seq(std::vector<StmtPtr> body, SourcePos pos = {});

bool operator==(const Stmt& a, const Stmt& b);

struct Program {
  StmtPtr body;  // always a Seq
  std::string source;

  const std::vector<StmtPtr>& statements() const;
};

/// Compares the ASTs only.
bool structurally_equal(const Program& a, const Program& b);

/// Names assigned anywhere in the program (assignments, variant arrays, ODE
/// left-hand sides), sorted.
std::vector<std::string> assigned_variables(const Program& program);

}  // namespace hysim
