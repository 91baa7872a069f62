#include "hysim/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "hysim/eval.hpp"
#include "hysim/lexer.hpp"
#include "hysim/parser.hpp"
#include "hysim/timegrid.hpp"

namespace hysim {

std::string HistogramQuery::predicate_text() const {
  return predicate ? pretty_print(*predicate) : std::string();
}

HistogramQuery parse_query(std::string_view text) {
  const std::vector<Token> tokens = tokenize(text);
  const Token& last = tokens.back();
  if (last.kind == TokenKind::Error) {
    throw QueryParseError(last.pos, "unexpected character '" + last.text + "'");
  }
  std::size_t i = 0;
  if (tokens[i].kind == TokenKind::Ident && tokens[i].text == "histogram") {
    if (tokens[i + 1].kind != TokenKind::Colon) {
      throw QueryParseError(tokens[i + 1].pos, "expected ':' after 'histogram'");
    }
    i += 2;
  }
  HistogramQuery q;
  try {
    q.predicate = parse_expression(tokens, i);
  } catch (const SourceError& e) {
    throw QueryParseError(e.pos(), e.detail());
  }
  if (q.predicate->type() != ValueType::Bool) {
    throw QueryParseError(q.predicate->pos, "histogram predicate must be a boolean expression");
  }
  if (tokens[i].kind != TokenKind::At) {
    throw QueryParseError(tokens[i].pos, "expected '@ every <period>' after the predicate");
  }
  ++i;
  if (tokens[i].kind != TokenKind::Ident || tokens[i].text != "every") {
    throw QueryParseError(tokens[i].pos, "expected 'every' after '@'");
  }
  ++i;
  if (tokens[i].kind != TokenKind::Number) {
    throw QueryParseError(tokens[i].pos, "expected a period after 'every'");
  }
  q.period = tokens[i].number;
  if (!(q.period > 0) || !std::isfinite(q.period)) {
    throw QueryParseError(tokens[i].pos, "period must be positive");
  }
  ++i;
  if (tokens[i].kind != TokenKind::End) {
    throw QueryParseError(tokens[i].pos, "unexpected '" + tokens[i].text + "' after the period");
  }
  return q;
}

void check_period_compatible(double period, double sample_every) {
  const double ratio = period / sample_every;
  if (ratio < 1.0 - kTimeTolerance || std::abs(ratio - std::round(ratio)) > 1e-6) {
    throw ConfigError("histogram period must be a whole multiple of sampleEvery");
  }
}

std::optional<bool> evaluate_at(const RunResult& result, const Expr& predicate, double t) {
  const auto& samples = result.trajectory.samples;
  if (samples.empty()) return std::nullopt;
  if (t > result.end_time && !same_time(t, result.end_time)) return std::nullopt;
  // Last sample with time <= t (within tolerance).
  const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                   [](double value, const Sample& s) {
                                     return value < s.t && !same_time(value, s.t);
                                   });
  if (it == samples.begin()) return std::nullopt;
  try {
    return eval_bool(predicate, std::prev(it)->state);
  } catch (const SourceError&) {
    return std::nullopt;
  }
}

HistogramResult build_histogram(const std::vector<RunResult>& results,
                                const HistogramQuery& query, double default_horizon) {
  HistogramResult out;
  out.predicate = query.predicate_text();
  out.every = query.period;
  out.horizon = query.horizon.value_or(default_horizon);
  const std::size_t n = grid_size(out.horizon, query.period);
  out.bins.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    HistogramBin bin{grid_time(k, query.period), 0, 0};
    for (const auto& r : results) {
      const auto v = evaluate_at(r, *query.predicate, bin.t);
      if (!v) continue;
      ++bin.total;
      if (*v) ++bin.count;
    }
    out.bins.push_back(bin);
  }
  return out;
}

}  // namespace hysim
