#pragma once

#include <stdexcept>
#include <string>

namespace rfsim {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition was violated (degenerate geometry, singular point, bad range).
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// The multi-bounce series grew past the divergence guard.
class DivergenceError : public Error {
public:
  using Error::Error;
};

/// A scene/config document failed validation. `path` names the offending field.
class ConfigError : public Error {
public:
  ConfigError(std::string path, const std::string& reason)
      : Error(path + ": " + reason), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace rfsim
