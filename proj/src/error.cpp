#include "rvs/error.hpp"

#include <utility>

namespace rvs {

namespace {

std::string decorate(const std::string& message, std::size_t line,
                     const std::string& field) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!field.empty()) out += "field '" + field + "': ";
  return out + message;
}

}  // namespace

ValidationError::ValidationError(const std::string& message, std::size_t line,
                                 std::string field)
    : Error(decorate(message, line, field)), line_(line), field_(std::move(field)) {}

RequestRejected::RequestRejected(const std::string& message, int status)
    : BackendError(message + " (status " + std::to_string(status) + ")"),
      status_(status) {}

}  // namespace rvs
