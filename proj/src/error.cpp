#include "r2p2p/error.hpp"

namespace r2p2p {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::InvalidCode: return "InvalidCode";
    case ErrorCode::InvalidCitations: return "InvalidCitations";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::UnexpectedElement: return "UnexpectedElement";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::UnknownDocType: return "UnknownDocType";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::InvalidRating: return "InvalidRating";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::IntegrityError: return "IntegrityError";
  }
  return "Unknown";
}

}  // namespace r2p2p
