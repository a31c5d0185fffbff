#pragma once

#include <stdexcept>
#include <string>

namespace corpusbias {

// Base class for all toolkit failures. Messages carry full context
// (file, line, byte offset, word) so the CLI can print them verbatim.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files (corpus encoding, vector files, TSV/JSON artifacts).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration: unresolvable context words, empty vocabulary,
// missing paths, bad option combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Undefined quantities at runtime: zero marginals, zero-norm vectors,
// degenerate training inputs.
class DataError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace corpusbias
