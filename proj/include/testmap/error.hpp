#pragma once

#include <stdexcept>
#include <string>

namespace testmap {

/// Fatal error surfaced to the CLI (exit code 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input data (dataset JSON, vocabulary, repo list).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace testmap
