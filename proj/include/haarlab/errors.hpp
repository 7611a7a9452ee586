#pragma once

#include <stdexcept>
#include <string>

namespace haarlab {

/// Base class for every error raised by the library.
class LabError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public LabError {
 public:
  using LabError::LabError;
};

class LevelOverflow : public LabError {
 public:
  using LabError::LabError;
};

class RootHasNoParent : public LabError {
 public:
  using LabError::LabError;
};

class DimensionMismatch : public LabError {
 public:
  using LabError::LabError;
};

class NotRepresentable : public LabError {
 public:
  using LabError::LabError;
};

class PreconditionViolated : public LabError {
 public:
  using LabError::LabError;
};

class UnsupportedVariant : public LabError {
 public:
  using LabError::LabError;
};

class UnknownSpec : public LabError {
 public:
  using LabError::LabError;
};

class EmptyFamily : public LabError {
 public:
  using LabError::LabError;
};

}  // namespace haarlab
