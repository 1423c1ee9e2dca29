#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pardoc {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments or violated preconditions (invalid vocabulary sizes,
// degenerate boxes, out-of-range probabilities, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Malformed textual input; carries the 1-based line (or item) index when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line = 0)
      : Error(line ? msg + " (line " + std::to_string(line) + ")" : msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Structurally inconsistent data: ragged tables, relation cycles,
// conflicting parents, spans that do not tile.
class StructureError : public Error {
 public:
  explicit StructureError(const std::string& msg) : Error(msg) {}
};

// Batched output did not split into the expected number of segments.
// Callers catch this to fall back to per-element decoding.
class DecompositionMismatch : public Error {
 public:
  DecompositionMismatch(std::size_t expected, std::size_t actual)
      : Error("expected " + std::to_string(expected) + " segments, got " +
              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}
  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

}  // namespace pardoc
