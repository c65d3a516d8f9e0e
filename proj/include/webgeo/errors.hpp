#pragma once

#include <stdexcept>
#include <string>

namespace webgeo {

// Base of every error the toolkit raises. The category drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  enum class Category { config, data, convergence };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Category::config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(Category::data, what) {}
};

// Missing mandatory column in a delimited table.
class SchemaError : public DataError {
 public:
  explicit SchemaError(const std::string& what) : DataError("schema: " + what) {}
};

// Hostname equal to or shorter than its public suffix.
class UnmappableDomain : public DataError {
 public:
  explicit UnmappableDomain(const std::string& fqdn)
      : DataError("unmappable domain: " + fqdn), fqdn_(fqdn) {}
  const std::string& fqdn() const noexcept { return fqdn_; }

 private:
  std::string fqdn_;
};

// Two metadata rows disagree about the same key.
class ConflictError : public DataError {
 public:
  ConflictError(const std::string& key, const std::string& what)
      : DataError("conflict for " + key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class EmptyNetworkError : public DataError {
 public:
  explicit EmptyNetworkError(const std::string& what) : DataError("empty network: " + what) {}
};

class DisconnectedError : public DataError {
 public:
  explicit DisconnectedError(const std::string& what) : DataError("disconnected: " + what) {}
};

// Synthetic-network parameters that produce no usable graph.
class GenerationError : public DataError {
 public:
  explicit GenerationError(const std::string& what) : DataError("generation: " + what) {}
};

class ParameterError : public ConfigError {
 public:
  explicit ParameterError(const std::string& what) : ConfigError("parameter: " + what) {}
};

// Power-law fit without enough (or without varied) tail samples. Carries the
// best-effort estimate so callers can still report something.
class FitUnreliable : public DataError {
 public:
  FitUnreliable(const std::string& what, double gamma, long k_min)
      : DataError("power-law fit unreliable: " + what), gamma_(gamma), k_min_(k_min) {}
  double gamma() const noexcept { return gamma_; }
  long k_min() const noexcept { return k_min_; }

 private:
  double gamma_;
  long k_min_;
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& what) : Error(Category::convergence, what) {}
};

}  // namespace webgeo
