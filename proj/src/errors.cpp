#include "catsim/errors.hpp"

namespace catsim {
namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += "; ";
    if (!d.field.empty()) out += d.field + ": ";
    out += d.message;
  }
  return out.empty() ? "invalid configuration" : out;
}

}  // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ConfigError::ConfigError(std::string field, std::string message)
    : ConfigError(std::vector<Diagnostic>{{std::move(field), std::move(message)}}) {}

}  // namespace catsim
