#pragma once

#include <stdexcept>
#include <string>

namespace susyqm {

/// Thrown when an operation is handed arguments outside its domain
/// (too-small grid, excluded parameter range, singular transformation).
class invalid_input : public std::invalid_argument {
 public:
  explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace susyqm
