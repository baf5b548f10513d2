#pragma once

#include <stdexcept>
#include <string>

namespace newscat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user-supplied configuration: unknown column, invalid hyperparameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// An operation was left with (or given) zero documents.
class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

// Input data violates a numeric precondition (non-finite values, shapes).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Features do not match what a model was trained on or accepts.
class ContractError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// SMOTE cannot find a same-class neighbour.
class UnsatisfiableNeighborsError : public Error {
 public:
  using Error::Error;
};

}  // namespace newscat
