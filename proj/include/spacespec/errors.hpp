#pragma once

#include <stdexcept>
#include <string>

namespace spacespec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

struct ChartError : Error {
  using Error::Error;
};

struct GeometryError : Error {
  using Error::Error;
};

struct MeshError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

// Malformed files, flags or configuration values.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace spacespec
