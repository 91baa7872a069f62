#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace hysim::testing {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json golden(const std::string& name) {
  return nlohmann::json::parse(slurp(std::string(HYSIM_GOLDEN_DIR) + "/" + name));
}

inline std::string program_text(const std::string& name) {
  return slurp(std::string(HYSIM_PROGRAMS_DIR) + "/" + name);
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the hysim binary through the shell; `args` is appended verbatim.
inline CliResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  const std::string tag = std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const auto out = dir / ("hysim_out_" + tag);
  const auto err = dir / ("hysim_err_" + tag);
  const std::string cmd = env + " '" HYSIM_CLI_PATH "' " + args + " >'" + out.string() +
                          "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out.string());
  r.err = slurp(err.string());
  std::filesystem::remove(out);
  std::filesystem::remove(err);
  return r;
}

inline std::string program_path(const std::string& name) {
  return std::string(HYSIM_PROGRAMS_DIR) + "/" + name;
}

// A scratch file removed on scope exit.
class TempFile {
 public:
  explicit TempFile(const std::string& name, const std::string& content = "")
      : path_(std::filesystem::temp_directory_path() /
              (std::to_string(::getpid()) + "_" + name)) {
    std::ofstream(path_, std::ios::binary) << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  std::string path() const { return path_.string(); }
  std::string read() const { return slurp(path()); }

 private:
  std::filesystem::path path_;
};

}  // namespace hysim::testing
