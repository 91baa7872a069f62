#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hysim/ast.hpp"
#include "hysim/errors.hpp"
#include "hysim/interp.hpp"

namespace hysim {

class QueryParseError : public SourceError {
 public:
  QueryParseError(SourcePos pos, const std::string& message)
      : SourceError("QueryParseError", pos, message) {}
};

struct HistogramQuery {
  ExprPtr predicate;  // boolean
  double period = 1.0;
  /// Last bin time; unset means "the simulation horizon".
  std::optional<double> horizon;

  std::string predicate_text() const;
};

/// Parses `[histogram:] <predicate> @ every <period>`. Positions are
/// 1-based columns into `text`. Throws QueryParseError.
HistogramQuery parse_query(std::string_view text);

/// Throws ConfigError unless `period` is a whole multiple of `sample_every`.
void check_period_compatible(double period, double sample_every);

/// The predicate on the last sample at or before t (step-function reading of
/// the trajectory). nullopt when the run ended before t, has no sample yet,
/// or the predicate cannot be evaluated on that state (unbound variable or
/// evaluation error).
std::optional<bool> evaluate_at(const RunResult& result, const Expr& predicate, double t);

struct HistogramBin {
  double t = 0.0;
  std::size_t count = 0;  // runs where the predicate holds at t
  std::size_t total = 0;  // runs evaluable at t

  friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

struct HistogramResult {
  std::string predicate;
  double every = 1.0;
  double horizon = 0.0;
  std::vector<HistogramBin> bins;  // t = 0, every, 2*every, ... <= horizon
};

HistogramResult build_histogram(const std::vector<RunResult>& results,
                                const HistogramQuery& query, double default_horizon);

}  // namespace hysim
