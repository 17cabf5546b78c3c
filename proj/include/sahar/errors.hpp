// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sahar {

// Coarse error families. The C API and the CLI exit status are derived from these.
enum class ErrorKind {
  Config,
  Data,
  Dimension,
  Numeric,
  Io,
  Integrity,
  Compatibility,
  Protocol,
  Runtime,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define SAHAR_DEFINE_ERROR(Name, Kind)                                  \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

SAHAR_DEFINE_ERROR(ConfigError, Config)
SAHAR_DEFINE_ERROR(DataError, Data)
SAHAR_DEFINE_ERROR(DimensionError, Dimension)
SAHAR_DEFINE_ERROR(NumericError, Numeric)
SAHAR_DEFINE_ERROR(IoError, Io)
SAHAR_DEFINE_ERROR(IntegrityError, Integrity)
SAHAR_DEFINE_ERROR(CompatibilityError, Compatibility)
SAHAR_DEFINE_ERROR(ProtocolError, Protocol)

#undef SAHAR_DEFINE_ERROR

// Parse failures and unknown labels are data errors with a specific message prefix.
class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& detail)
      : DataError(source + ":" + std::to_string(line) + ": " + detail), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class VocabularyError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace sahar
