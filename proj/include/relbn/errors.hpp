#pragma once

#include <stdexcept>
#include <string>

namespace relbn {

// Base of every error the library raises; `exit_code` is what the CLI returns.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int exit_code)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

// Malformed input text; carries a 1-based position when known.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what, int line = 0, int col = 0)
      : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(col) + ": " + what : what, 1),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what, 1) {}
};

// A configurable guard (node cap, root cap, edge guard) was exceeded.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, unsigned long long count)
      : Error(what + " (count " + std::to_string(count) + ")", 2), count_(count) {}
  unsigned long long count() const { return count_; }

 private:
  unsigned long long count_;
};

// Input is well formed but outside the shape an engine supports.
class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(what, 2) {}
};

// P(E) = 0, so P(Q|E) is undefined.
class ZeroEvidence : public Error {
 public:
  ZeroEvidence() : Error("evidence has probability zero", 3) {}
};

}  // namespace relbn
