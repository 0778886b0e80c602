#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mwpx {

enum class ErrorCode {
  ArityError,
  UnknownToken,
  DivisionByZero,
  UnboundNumberToken,
  DegenerateEquation,
  MalformedRecord,
  EmptyInput,
  InvalidArgument,
  NonFiniteLoss,
  VersionMismatch,
  CorruptFile,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this exception; callers switch
// on code() when they need to distinguish causes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// A data error tied to a specific input record.
class RecordError : public Error {
 public:
  RecordError(ErrorCode code, std::string record_id, std::size_t line, const std::string& what)
      : Error(code, "record '" + record_id + "' (line " + std::to_string(line) + "): " + what),
        record_id_(std::move(record_id)),
        line_(line) {}

  const std::string& record_id() const noexcept { return record_id_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string record_id_;
  std::size_t line_;
};

}  // namespace mwpx
