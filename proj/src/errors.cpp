#include "hysim/errors.hpp"

namespace hysim {

std::string to_string(const SourcePos& pos) {
  if (!pos.known()) return "?";
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

namespace {

std::string compose(const std::string& kind, const SourcePos& pos, const std::string& message) {
  if (!pos.known()) return kind + ": " + message;
  return kind + " at " + to_string(pos) + ": " + message;
}

}  // namespace

SourceError::SourceError(std::string kind, SourcePos pos, const std::string& message)
    : std::runtime_error(compose(kind, pos, message)),
      kind_(std::move(kind)),
      pos_(pos),
      detail_(message) {}

}  // namespace hysim
