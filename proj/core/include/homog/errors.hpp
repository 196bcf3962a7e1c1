#ifndef HOMOG_ERRORS_HPP
#define HOMOG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace homog {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file (mesh, CSV, ...); message carries the line number.
class ParseError : public Error {
public:
  using Error::Error;
};

/// A structural invariant of a parsed or constructed object is violated.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Material data outside its admissible range (non-SPD stiffness, rho*cp <= 0, ...).
class MaterialError : public Error {
public:
  using Error::Error;
};

/// Linear solver failure: singular or rank-deficient system.
class SolverError : public Error {
public:
  using Error::Error;
};

/// Periodic node pairing could not be established.
class PairingError : public Error {
public:
  using Error::Error;
};

/// Run-configuration schema violation; message enumerates all problems.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a model (T >= Tg, c outside [0,1], ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Nonlinear fit failed to converge.
class FittingError : public Error {
public:
  using Error::Error;
};

} // namespace homog

#endif
