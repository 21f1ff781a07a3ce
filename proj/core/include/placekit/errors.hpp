#pragma once

#include <stdexcept>
#include <string>

namespace placekit {

// Bad input data: unreadable/malformed benchmark files, schema violations,
// dangling references. CLI maps this to exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed line in a text format; carries file and 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(const std::string& file, int line, const std::string& what)
      : DataError(file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

// Invalid configuration (bad flag combination, invalid ranges). Exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ask/tell contract violations and exhausted budgets.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace placekit
