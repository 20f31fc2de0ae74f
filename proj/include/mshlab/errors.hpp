#ifndef MSHLAB_ERRORS_HPP
#define MSHLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mshlab {

// Bad parameters, malformed inputs, bidimension violations.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Setting outside 1 <= m < n.
class InvalidSetting : public InvalidInput {
 public:
  explicit InvalidSetting(const std::string& what) : InvalidInput(what) {}
};

// Evaluation requested exactly on a pole where the quantity has no finite value.
class SingularPoint : public std::runtime_error {
 public:
  explicit SingularPoint(const std::string& what) : std::runtime_error(what) {}
};

// A mass/mean integral whose local exponent makes it non-integrable.
class DivergentIntegral : public std::runtime_error {
 public:
  explicit DivergentIntegral(const std::string& what) : std::runtime_error(what) {}
};

// Function-spec grammar errors carry the byte offset and what was expected.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position, const std::string& expected)
      : std::runtime_error(what + " at offset " + std::to_string(position) +
                           (expected.empty() ? "" : " (expected " + expected + ")")),
        position(position),
        expected(expected) {}
  ParseError(std::size_t position, const std::string& expected)
      : ParseError("malformed spec", position, expected) {}
  std::size_t position;
  std::string expected;
};

}  // namespace mshlab

#endif
