// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_ERRORS_HPP_
#define GBLOCKS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gblocks {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension or shape mismatch, unsupported block structure.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Input violates an operation's precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An enumeration or state-space cap was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Fixed-width integer arithmetic would have overflowed.
class OverflowError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

// A post-hoc consistency check failed.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gblocks

#endif  // GBLOCKS_ERRORS_HPP_
