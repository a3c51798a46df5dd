// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace slopscope {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad command-line usage or configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Missing or unreadable input (root directory, repository, config file).
class InputError : public Error {
 public:
  using Error::Error;
};

// Rule file failed to load or validate.
class RuleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::uint32_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::uint32_t line() const { return line_; }

 private:
  std::uint32_t line_;
};

// A metric input referenced something that cannot exist (line out of file
// bounds, unknown file). Indicates a bug upstream, not bad user input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace slopscope
