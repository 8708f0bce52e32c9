#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tumble {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// A signal started inside the initial/final support could reach the
/// truncation boundary before the final time.
class BoundaryContamination : public Error {
 public:
  using Error::Error;
};

/// Non-finite state in a solve or a non-finite loss in an optimizer run.
class Divergence : public Error {
 public:
  explicit Divergence(const std::string& what, std::vector<double> last_good = {})
      : Error(what), last_good_(std::move(last_good)) {}
  const std::vector<double>& last_good() const noexcept { return last_good_; }

 private:
  std::vector<double> last_good_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// lambda_min <= eps * lambda_max: no spectral step exists.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

class InfeasibleDesign : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tumble
