#pragma once

#include <stdexcept>

namespace sitelink {

// Base of everything thrown by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, rows, symbols).
class input_error : public error {
 public:
  using error::error;
};

// Invalid parameters or run configuration.
class config_error : public error {
 public:
  using error::error;
};

// Exact enumeration would exceed the configured subset budget.
class budget_error : public config_error {
 public:
  using config_error::config_error;
};

}  // namespace sitelink
