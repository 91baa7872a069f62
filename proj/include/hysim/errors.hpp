#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hysim {

/// 1-based line/column into the program source. Line 0 means "no position".
struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;

  bool known() const { return line != 0; }
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

std::string to_string(const SourcePos& pos);

/// Base of every diagnostic that points into program text.
class SourceError : public std::runtime_error {
 public:
  SourceError(std::string kind, SourcePos pos, const std::string& message);

  const std::string& kind() const { return kind_; }
  const SourcePos& pos() const { return pos_; }
  /// Message without the kind/position prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string kind_;
  SourcePos pos_;
  std::string detail_;
};

class LexError : public SourceError {
 public:
  LexError(SourcePos pos, const std::string& offending)
      : SourceError("LexError", pos, "unexpected character '" + offending + "'") {}
};

class ParseError : public SourceError {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : SourceError("ParseError", pos, message) {}
};

class TypeError : public SourceError {
 public:
  TypeError(SourcePos pos, const std::string& message)
      : SourceError("TypeError", pos, message) {}
};

class StructureError : public SourceError {
 public:
  StructureError(SourcePos pos, const std::string& message)
      : SourceError("StructureError", pos, message) {}
};

class RangeError : public SourceError {
 public:
  RangeError(SourcePos pos, const std::string& message)
      : SourceError("RangeError", pos, message) {}
};

/// Raised while evaluating an expression (division by zero, sqrt of a
/// negative, non-finite results).
class EvalError : public SourceError {
 public:
  EvalError(SourcePos pos, const std::string& message)
      : SourceError("EvalError", pos, message) {}
};

class UndefinedVariable : public SourceError {
 public:
  UndefinedVariable(SourcePos pos, const std::string& name)
      : SourceError("UndefinedVariable", pos, "variable '" + name + "' is not defined"),
        name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class ZeroTimeProgress : public SourceError {
 public:
  ZeroTimeProgress(SourcePos pos, const std::string& message)
      : SourceError("ZeroTimeProgress", pos, message) {}
};

/// Invalid simulation or query configuration (not tied to program text).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hysim
