#pragma once

#include <stdexcept>
#include <string>

namespace brd {

// Input text did not conform to a grammar. Carries 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(std::move(msg) + " (line " + std::to_string(line) +
                           ", column " + std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Well-formed input that violates a semantic contract (wrong language,
// structure not in class, comparable nodes, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// A construction ran out of prefix; `needed` is a lower bound on the depth
// that would let it continue.
class DepthError : public std::runtime_error {
 public:
  DepthError(const std::string& msg, int needed)
      : std::runtime_error(msg + " (need depth >= " + std::to_string(needed) +
                           ")"),
        needed(needed) {}
  int needed;
};

// The two degree enumerators disagreed. Never masked.
class EnumeratorMismatch : public std::runtime_error {
 public:
  explicit EnumeratorMismatch(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace brd
