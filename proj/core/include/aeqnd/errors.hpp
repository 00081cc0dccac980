#pragma once

#include <stdexcept>
#include <string>

namespace aeqnd {

// Malformed quantum numbers, mismatched spaces, unsupported inputs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Integrator / optimizer failures.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Laser tuned onto (or within Gamma/2 of) an excited hyperfine level.
class ResonanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config and species-file problems; `path` is the dotted location of the fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace aeqnd
