// hysim: parse, simulate, sweep and analyze hybrid programs.
//
// Exit codes: 0 success, 1 user error (parse/query/flags), 2 internal error.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hysim/acc.hpp"
#include "hysim/errors.hpp"
#include "hysim/parser.hpp"
#include "hysim/pipeline.hpp"
#include "hysim/server.hpp"
#include "hysim/version.hpp"

namespace {

constexpr int kUserError = 1;
constexpr int kInternalError = 2;

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UserError("cannot write '" + path + "'");
  out << text;
}

hysim::SimConfig default_config() {
  hysim::SimConfig cfg;
  if (const char* env = std::getenv("HYSIM_ODE_STEP"); env && *env) {
    char* end = nullptr;
    const double step = std::strtod(env, &end);
    if (*end != '\0' || !(step > 0)) {
      throw UserError(std::string("HYSIM_ODE_STEP must be a positive number, got '") + env + "'");
    }
    cfg.ode_step = step;
  }
  return cfg;
}

struct SimFlags {
  double max_time;
  double sample;
  double step;
  std::size_t parallelism = 0;
  std::size_t max_runs = hysim::kDefaultBatchCap;

  explicit SimFlags(const hysim::SimConfig& d)
      : max_time(d.max_time), sample(d.sample_every), step(d.ode_step) {}

  void add_to(CLI::App& cmd) {
    cmd.add_option("--max-time,-T", max_time, "Simulation horizon")->capture_default_str();
    cmd.add_option("--sample,-S", sample, "Output sampling period")->capture_default_str();
    cmd.add_option("--step,-H", step, "RK4 step (default from HYSIM_ODE_STEP)")
        ->capture_default_str();
    cmd.add_option("--parallelism,-j", parallelism, "Worker threads (0 = all cores)");
    cmd.add_option("--max-runs", max_runs, "Batch cap on the number of variant runs (0 = none)")
        ->capture_default_str();
  }

  hysim::SimConfig config() const {
    hysim::SimConfig cfg;
    cfg.max_time = max_time;
    cfg.sample_every = sample;
    cfg.ode_step = step;
    return cfg;
  }

  hysim::BatchOptions batch() const { return {parallelism, max_runs, {}}; }
};

void print_diagnostic(const std::string& file, const hysim::SourceError& e) {
  std::cerr << file << ":" << hysim::to_string(e.pos()) << ": " << e.kind() << ": " << e.detail()
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  hysim::SimConfig defaults;
  try {
    defaults = default_config();
  } catch (const UserError& e) {
    std::cerr << "hysim: " << e.what() << "\n";
    return kUserError;
  }

  CLI::App app{"Simulate and analyze hybrid programs"};
  app.set_version_flag("--version", hysim::kVersion);
  app.require_subcommand(1);

  std::string file;

  auto* parse_cmd = app.add_subcommand("parse", "Parse a program and print its AST");
  parse_cmd->add_option("file", file, "Program (.lince)")->required();
  bool pretty = false;
  parse_cmd->add_flag("--pretty", pretty, "Print canonical source instead of the AST");

  auto* run_cmd = app.add_subcommand("run", "Run every variant and write the trace");
  run_cmd->add_option("file", file, "Program (.lince)")->required();
  SimFlags run_flags(defaults);
  run_flags.add_to(*run_cmd);
  std::string out_path;
  std::string format = "json";
  run_cmd->add_option("--out,-o", out_path, "Output file (default stdout)");
  run_cmd->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  auto* hist_cmd = app.add_subcommand("hist", "Histogram of a predicate over all variants");
  hist_cmd->add_option("file", file, "Program (.lince)")->required();
  std::string query;
  hist_cmd->add_option("--query,-q", query, "e.g. 'histogram: ct <= 0 @ every 0.5'")->required();
  SimFlags hist_flags(defaults);
  hist_flags.add_to(*hist_cmd);
  hist_cmd->add_option("--out,-o", out_path, "Write histogram JSON here instead of drawing bars");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON API");
  hysim::server::ServerOptions server_opts;
  serve_cmd->add_option("--port,-p", server_opts.port, "Port (0 = any free port)")
      ->capture_default_str();
  serve_cmd->add_option("--host", server_opts.host, "Interface to bind")->capture_default_str();
  serve_cmd->add_option("--cors-origin", server_opts.cors_origins,
                        "Allowed CORS origin (repeatable; default any)");
  double timeout_s = 30.0;
  serve_cmd->add_option("--timeout", timeout_s, "Per-request time limit in seconds")
      ->capture_default_str();

  auto* acc_cmd = app.add_subcommand("acc-program", "Print the adaptive cruise control program");
  hysim::acc::Scenario scenario;
  int al_min = -3;
  int al_max = 3;
  acc_cmd->add_option("--fwd", scenario.params.fwd)->capture_default_str();
  acc_cmd->add_option("--bwd", scenario.params.bwd)->capture_default_str();
  acc_cmd->add_option("--st", scenario.params.st)->capture_default_str();
  acc_cmd->add_option("--pl", scenario.pl, "Leader start position")->capture_default_str();
  acc_cmd->add_option("--vl", scenario.vl, "Leader start velocity")->capture_default_str();
  acc_cmd->add_option("--al-min", al_min)->capture_default_str();
  acc_cmd->add_option("--al-max", al_max)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUserError;
  }

  try {
    if (*parse_cmd) {
      const std::string source = read_file(file);
      try {
        const hysim::Program program = hysim::parse(source);
        std::cout << (pretty ? hysim::pretty_print(program) : hysim::dump_ast(program));
      } catch (const hysim::SourceError& e) {
        print_diagnostic(file, e);
        return kUserError;
      }
    } else if (*run_cmd) {
      const std::string source = read_file(file);
      const hysim::SimConfig cfg = run_flags.config();
      try {
        const auto runs = hysim::simulate_source(source, cfg, run_flags.batch());
        write_output(out_path, format == "csv" ? hysim::trace_csv_text(runs)
                                               : hysim::trace_json_text(cfg, runs));
      } catch (const hysim::SourceError& e) {
        print_diagnostic(file, e);
        return kUserError;
      }
    } else if (*hist_cmd) {
      const std::string source = read_file(file);
      const hysim::SimConfig cfg = hist_flags.config();
      try {
        const auto result = hysim::histogram_for_source(source, query, cfg, hist_flags.batch());
        if (out_path.empty()) {
          std::cout << hysim::render_histogram_bars(result);
        } else {
          write_output(out_path, hysim::histogram_json_text(result));
        }
      } catch (const hysim::QueryParseError& e) {
        std::cerr << "query:" << hysim::to_string(e.pos()) << ": " << e.detail() << "\n";
        return kUserError;
      } catch (const hysim::SourceError& e) {
        print_diagnostic(file, e);
        return kUserError;
      }
    } else if (*serve_cmd) {
      server_opts.api.defaults = defaults;
      server_opts.api.timeout =
          std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000.0));
      hysim::server::Server server(server_opts);
      int port = 0;
      try {
        port = server.bind();
      } catch (const std::runtime_error& e) {
        std::cerr << "hysim: " << e.what() << "\n";
        return kUserError;
      }
      std::cout << "listening on http://" << server_opts.host << ":" << port << std::endl;
      server.serve();
    } else if (*acc_cmd) {
      if (al_min > al_max) throw UserError("--al-min must not exceed --al-max");
      std::vector<double> values;
      for (int a = al_min; a <= al_max; ++a) values.push_back(a);
      std::cout << hysim::acc::make_acc_program(scenario, values);
    }
  } catch (const UserError& e) {
    std::cerr << "hysim: " << e.what() << "\n";
    return kUserError;
  } catch (const hysim::ConfigError& e) {
    std::cerr << "hysim: " << e.what() << "\n";
    return kUserError;
  } catch (const hysim::BatchTooLarge& e) {
    std::cerr << "hysim: " << e.what() << " (raise it with --max-runs)\n";
    return kUserError;
  } catch (const std::exception& e) {
    std::cerr << "hysim: internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return 0;
}
