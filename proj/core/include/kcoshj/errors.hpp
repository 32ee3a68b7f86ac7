#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kcoshj {

/// Expression text could not be parsed. `position` is a 0-based byte offset
/// into the input string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Numeric evaluation left the domain of a function: log of a non-positive
/// value, division by zero, sqrt/abs/asin derivative at a non-differentiable
/// point, overflow to non-finite.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A type invariant or precondition was violated while building model objects
/// or loading a problem description.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid integration aborted: blow-up guard tripped or a field evaluation
/// failed. `node` is the multi-index of the offending grid node.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& message, std::vector<int> node)
      : std::runtime_error(message), node_(std::move(node)) {}

  const std::vector<int>& node() const { return node_; }

 private:
  std::vector<int> node_;
};

}  // namespace kcoshj
