#pragma once

#include <stdexcept>
#include <string>

namespace coopnet {

// Invalid input data (bad file contents, malformed values).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// An operation was asked to exceed a configured enumeration cap.
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// A claimed property of the input failed to hold; carries a witness description.
class inconsistency_error : public std::runtime_error {
 public:
  explicit inconsistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace coopnet
