#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace andor {

// Table size or variable count outside the supported range.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A data structure was handed values that break its documented invariants.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, long iteration = -1)
      : std::runtime_error(what), iteration_(iteration) {}
  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t byte_offset, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(byte_offset) + ": " + what),
        file_(std::move(file)),
        byte_offset_(byte_offset) {}
  const std::string& file() const noexcept { return file_; }
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::string file_;
  std::size_t byte_offset_;
};

}  // namespace andor
