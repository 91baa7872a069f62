#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hysim/analysis.hpp"
#include "hysim/interp.hpp"
#include "hysim/multirun.hpp"

namespace hysim {

// Shared by the CLI and the HTTP service so both emit identical bytes for
// identical inputs.

/// parse + expand_variants + run_all. Throws the parser's SourceErrors,
/// ConfigError and BatchTooLarge.
std::vector<RunResult> simulate_source(std::string_view source, const SimConfig& config,
                                       const BatchOptions& options = {});

/// `{ "config": {...}, "runs": [ {index, variant, status, samples} ] }`.
nlohmann::json trace_to_json(const SimConfig& config, const std::vector<RunResult>& runs);

/// Serialized trace, newline-terminated.
std::string trace_json_text(const SimConfig& config, const std::vector<RunResult>& runs);

/// One row per (run_index, t); columns run_index, t, the variant variables,
/// then the remaining variables alphabetically. Unbound cells are empty.
std::string trace_csv_text(const std::vector<RunResult>& runs);

/// Runs the program and builds the histogram for `query_text`. The horizon
/// is the simulation's max_time. Throws QueryParseError, ConfigError and
/// everything simulate_source throws.
HistogramResult histogram_for_source(std::string_view source, std::string_view query_text,
                                     const SimConfig& config, const BatchOptions& options = {});

/// `{ "query": {predicate, every, horizon}, "bins": [ {t, count, total} ] }`.
nlohmann::json histogram_to_json(const HistogramResult& result);
std::string histogram_json_text(const HistogramResult& result);

/// Terminal rendering: one line per bin with a bar scaled to `width`.
std::string render_histogram_bars(const HistogramResult& result, std::size_t width = 50);

/// `{kind, message, line, column}` for a positioned diagnostic.
nlohmann::json diagnostic_to_json(const SourceError& error);

}  // namespace hysim
