#pragma once

#include <stdexcept>
#include <string>

namespace fedsq {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Misconfigured architectures, schedules, shapes, experiment configs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Bad caller-supplied data (labels out of range, undersized datasets, masks
// that do not match the evaluated batch).
class InputError : public Error {
 public:
  using Error::Error;
};

// Non-finite values surfaced by a public operation.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed files (checkpoints, datasets, logs, plans).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Federation contract violations (empty update sets, client failures).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Partition construction failures (infeasible min-size after retries).
class PartitionError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedsq
