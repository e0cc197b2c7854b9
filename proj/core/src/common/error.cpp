#include "healthledger/common/error.hpp"

namespace hl {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyConsortium: return "EmptyConsortium";
    case ErrorKind::ChainLink: return "ChainLinkError";
    case ErrorKind::Height: return "HeightError";
    case ErrorKind::Oversize: return "OversizeError";
    case ErrorKind::AlreadyBootstrapped: return "AlreadyBootstrapped";
    case ErrorKind::Authorization: return "AuthorizationError";
    case ErrorKind::DuplicateIdentity: return "DuplicateIdentity";
    case ErrorKind::InvalidIdentity: return "Invalid Identity";
    case ErrorKind::InvalidPassword: return "Invalid Password";
    case ErrorKind::InvalidSignature: return "InvalidSignature";
    case ErrorKind::SessionExpired: return "SessionExpired";
    case ErrorKind::NotLeader: return "NotLeader";
    case ErrorKind::Duplicate: return "Duplicate";
    case ErrorKind::NotPending: return "NotPending";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::UnknownDoctor: return "UnknownDoctor";
    case ErrorKind::UnknownMedicine: return "UnknownMedicine";
    case ErrorKind::UnauthorizedMedicine: return "UnauthorizedMedicine";
    case ErrorKind::SlotTaken: return "SlotTaken";
    case ErrorKind::ConsentRequired: return "ConsentRequired";
    case ErrorKind::ConsentExpired: return "ConsentExpired";
    case ErrorKind::InvalidTransition: return "InvalidTransition";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Chaincode: return "ChaincodeError";
    case ErrorKind::PolicyUnsatisfied: return "PolicyUnsatisfied";
    case ErrorKind::Timeout: return "TimeoutError";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::Bind: return "BindError";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::TargetUnreachable: return "TargetUnreachable";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

}  // namespace hl
