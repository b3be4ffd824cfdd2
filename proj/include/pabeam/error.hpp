#pragma once

#include <stdexcept>
#include <string>

namespace pabeam {

// All recoverable failures carry a short machine-parsable class name so the
// CLI can report "error:<kind>: <message>" on a single line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

}  // namespace pabeam
