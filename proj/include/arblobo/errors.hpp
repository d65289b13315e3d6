#pragma once

#include <stdexcept>
#include <string>

namespace arblobo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class DivergenceSuspected : public Error {
 public:
  using Error::Error;
};

class MaxIterExceeded : public Error {
 public:
  using Error::Error;
};

class Unbounded : public Error {
 public:
  using Error::Error;
};

class NotReversible : public Error {
 public:
  using Error::Error;
};

class TooManyStates : public Error {
 public:
  using Error::Error;
};

class InfeasibleMarginals : public Error {
 public:
  using Error::Error;
};

class InsufficientCoverage : public Error {
 public:
  using Error::Error;
};

/// Raised when a numerical verification of a lower bound finds a counterexample.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace arblobo
