#pragma once

#include <stdexcept>
#include <string>

namespace oddterw {

// Invalid caller-supplied parameter (m out of range, class index, subset size).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Matrix dimensions do not conform.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Subset list has the wrong size, is unsorted, or leaves the ground set.
class MalformedSubsetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A checked 64-bit computation would have overflowed.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Span closure failed to stabilize within its round cap.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two evaluations of a closed-form count disagree.
class FormulaError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oddterw
