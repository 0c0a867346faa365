#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chroma_sr {

/// Bad argument to a library operation (dimensions, ranges, bounds).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid run configuration. Carries the names of every violated field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> fields, const std::string& detail);
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Numerical failure (non-finite values, failed decomposition).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wraps a failure inside the pipeline with the name of the stage that raised it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error("stage '" + stage + "': " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

inline ConfigError::ConfigError(std::vector<std::string> fields, const std::string& detail)
    : std::runtime_error(detail), fields_(std::move(fields)) {}

}  // namespace chroma_sr
