#pragma once

#include <stdexcept>
#include <string>

namespace tae {

/// Raised when operand dimensions do not line up.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when optimization produces a non-finite loss or gradient.
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files (CSV, config, model documents).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tae
