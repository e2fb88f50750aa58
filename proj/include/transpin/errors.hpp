#pragma once

#include <stdexcept>
#include <string>

namespace transpin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mode index not allowed for its family (TM with m*n == 0, TE with m == 0).
class RejectedModeError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point or argument outside the domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Quadrature too coarse for the integrand; carries the node count that would do.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, int suggested)
      : Error(what + " (suggested: " + std::to_string(suggested) + ")"),
        suggested_(suggested) {}
  int suggested() const noexcept { return suggested_; }

 private:
  int suggested_;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class RepresentationError : public Error {
 public:
  using Error::Error;
};

/// Quantity requested for a case the underlying derivation does not cover.
class UnsupportedDerivationError : public Error {
 public:
  using Error::Error;
};

}  // namespace transpin
