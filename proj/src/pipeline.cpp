#include "hysim/pipeline.hpp"

#include <algorithm>
#include <set>

#include "hysim/parser.hpp"

namespace hysim {

using nlohmann::json;

std::vector<RunResult> simulate_source(std::string_view source, const SimConfig& config,
                                       const BatchOptions& options) {
  config.validate();
  const Program program = parse(source);
  return run_all(program, config, options);
}

namespace {

json state_json(const State& state, const std::vector<std::string>& variables) {
  json out = json::object();
  for (const auto& name : variables) {
    const auto it = state.find(name);
    out[name] = it == state.end() ? json(nullptr) : json(it->second);
  }
  return out;
}

json run_json(const RunResult& r) {
  json run = json::object();
  run["index"] = r.trajectory.run_index;
  json variant = json::object();
  for (const auto& [name, value] : r.variant()) variant[name] = value;
  run["variant"] = std::move(variant);
  run["status"] = std::string(to_string(r.status));
  if (r.failure) {
    run["error"] = {
        {"kind", r.failure->kind},
        {"message", r.failure->message},
        {"time", r.failure->time},
        {"line", r.failure->pos.line},
        {"column", r.failure->pos.column},
    };
  }
  json samples = json::array();
  for (const auto& s : r.trajectory.samples) {
    samples.push_back({{"t", s.t}, {"state", state_json(s.state, r.variables)}});
  }
  run["samples"] = std::move(samples);
  return run;
}

}  // namespace

json trace_to_json(const SimConfig& config, const std::vector<RunResult>& runs) {
  json out = json::object();
  out["config"] = {
      {"maxTime", config.max_time},
      {"sampleEvery", config.sample_every},
      {"odeStep", config.ode_step},
  };
  json list = json::array();
  for (const auto& r : runs) list.push_back(run_json(r));
  out["runs"] = std::move(list);
  return out;
}

std::string trace_json_text(const SimConfig& config, const std::vector<RunResult>& runs) {
  return trace_to_json(config, runs).dump() + "\n";
}

std::string trace_csv_text(const std::vector<RunResult>& runs) {
  std::vector<std::string> variant_cols;
  std::set<std::string> seen;
  for (const auto& r : runs) {
    for (const auto& [name, value] : r.variant()) {
      if (seen.insert(name).second) variant_cols.push_back(name);
    }
  }
  std::set<std::string> rest;
  for (const auto& r : runs) {
    for (const auto& name : r.variables) {
      if (!seen.count(name)) rest.insert(name);
    }
  }
  std::vector<std::string> columns = variant_cols;
  columns.insert(columns.end(), rest.begin(), rest.end());

  std::string out = "run_index,t";
  for (const auto& c : columns) out += "," + c;
  out += '\n';
  for (const auto& r : runs) {
    for (const auto& s : r.trajectory.samples) {
      out += std::to_string(r.trajectory.run_index) + "," + format_number(s.t);
      for (const auto& c : columns) {
        out += ',';
        if (const auto it = s.state.find(c); it != s.state.end()) out += format_number(it->second);
      }
      out += '\n';
    }
  }
  return out;
}

HistogramResult histogram_for_source(std::string_view source, std::string_view query_text,
                                     const SimConfig& config, const BatchOptions& options) {
  const HistogramQuery query = parse_query(query_text);
  config.validate();
  check_period_compatible(query.period, config.sample_every);
  const std::vector<RunResult> runs = simulate_source(source, config, options);
  return build_histogram(runs, query, config.max_time);
}

json histogram_to_json(const HistogramResult& result) {
  json bins = json::array();
  for (const auto& b : result.bins) {
    bins.push_back({{"t", b.t}, {"count", b.count}, {"total", b.total}});
  }
  return {
      {"query", {{"predicate", result.predicate}, {"every", result.every}, {"horizon", result.horizon}}},
      {"bins", std::move(bins)},
  };
}

std::string histogram_json_text(const HistogramResult& result) {
  return histogram_to_json(result).dump() + "\n";
}

std::string render_histogram_bars(const HistogramResult& result, std::size_t width) {
  std::size_t max_total = 0;
  for (const auto& b : result.bins) max_total = std::max(max_total, b.total);
  std::string out = "histogram: " + result.predicate + " @ every " + format_number(result.every) +
                    "\n";
  std::size_t label_width = 0;
  for (const auto& b : result.bins) label_width = std::max(label_width, format_number(b.t).size());
  for (const auto& b : result.bins) {
    std::string label = format_number(b.t);
    label.insert(0, label_width - label.size(), ' ');
    const std::size_t len = max_total == 0 ? 0 : (b.count * width + max_total / 2) / max_total;
    out += label + " | " + std::string(len, '#') + std::string(width - len, ' ') + " " +
           std::to_string(b.count) + "/" + std::to_string(b.total) + "\n";
  }
  return out;
}

json diagnostic_to_json(const SourceError& error) {
  return {
      {"kind", error.kind()},
      {"message", error.detail()},
      {"line", error.pos().line},
      {"column", error.pos().column},
  };
}

}  // namespace hysim
