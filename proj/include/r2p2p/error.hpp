#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace r2p2p {

enum class ErrorCode {
  MalformedXml,
  InvalidCode,
  InvalidCitations,
  MissingField,
  UnexpectedElement,
  InvalidField,
  UnknownEntity,
  UnknownDocType,
  Unauthorized,
  InvalidRating,
  NotFound,
  ProtocolError,
  TransportError,
  ConfigError,
  IoError,
  IntegrityError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// C boundary can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace r2p2p
