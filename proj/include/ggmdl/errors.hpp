#pragma once

#include <stdexcept>
#include <string>

namespace ggmdl {

struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& msg) : std::invalid_argument(msg) {}
};

struct SingularInput : std::runtime_error {
  explicit SingularInput(const std::string& msg) : std::runtime_error(msg) {}
};

struct IncompatibleDimension : std::invalid_argument {
  explicit IncompatibleDimension(const std::string& msg) : std::invalid_argument(msg) {}
};

struct EmptyInput : std::invalid_argument {
  explicit EmptyInput(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace ggmdl
