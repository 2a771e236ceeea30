#pragma once

#include <stdexcept>
#include <string>

namespace scdirac {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or incomplete configuration (unknown field kind, missing key, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A function argument violates its precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Integration produced a non-finite state.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// Two bands came closer than the gap tolerance.
class BandCrossingError : public Error {
 public:
  BandCrossingError(const std::string& what, double gap) : Error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

}  // namespace scdirac
