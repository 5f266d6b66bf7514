#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dspass {

/// Caller handed an operation arguments that violate its preconditions
/// (shape mismatches, invalid parameters, out-of-range ids).
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/// A file's bytes do not match the expected container layout. Carries the
/// byte offset at which decoding failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what + " (at byte offset " +
                           std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}
  std::size_t byte_offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Filesystem-level failure: missing file, unreadable path, short write.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// An invariant the library itself guarantees was observed broken.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace dspass
