#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "hysim/ast.hpp"

namespace hysim {

/// Variable valuation. Ordered so that iteration (and therefore output) is
/// deterministic.
using State = std::map<std::string, double, std::less<>>;

/// Read-only variable lookup used by the evaluator.
class Scope {
 public:
  virtual ~Scope() = default;
  virtual std::optional<double> lookup(std::string_view name) const = 0;
};

class StateScope final : public Scope {
 public:
  explicit StateScope(const State& state) : state_(state) {}
  std::optional<double> lookup(std::string_view name) const override;

 private:
  const State& state_;
};

using Value = std::variant<double, bool>;

/// IEEE double evaluation; `&&` and `||` short-circuit left to right.
/// Throws EvalError on division by zero, sqrt of a negative or any other
/// non-finite arithmetic result, and UndefinedVariable for unbound names.
Value eval_expr(const Expr& e, const Scope& scope);

double eval_real(const Expr& e, const Scope& scope);
bool eval_bool(const Expr& e, const Scope& scope);

inline Value eval_expr(const Expr& e, const State& state) {
  return eval_expr(e, StateScope(state));
}
inline double eval_real(const Expr& e, const State& state) {
  return eval_real(e, StateScope(state));
}
inline bool eval_bool(const Expr& e, const State& state) {
  return eval_bool(e, StateScope(state));
}

}  // namespace hysim
