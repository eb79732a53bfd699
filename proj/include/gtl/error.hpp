#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gtl {

enum class ErrorCode {
  Input = 1,       // malformed or inconsistent input data
  Parse = 2,       // formula text does not match the grammar
  Range = 3,       // index or value out of its admissible range
  Usage = 4,       // API misuse (e.g. evaluating a parameterized formula)
  Scope = 5,       // formula outside the supported fragment
  Infeasible = 6,  // a search could not meet its constraint
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column,
             std::vector<std::string> expected);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace gtl
