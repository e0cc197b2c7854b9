#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hl {

// Every failure surfaced by the library carries one of these kinds. The
// gateway maps them onto HTTP status codes, so keep the list closed.
enum class ErrorKind {
  // ledger
  EmptyConsortium,
  ChainLink,
  Height,
  Oversize,
  // identity
  AlreadyBootstrapped,
  Authorization,
  DuplicateIdentity,
  InvalidIdentity,
  InvalidPassword,
  InvalidSignature,
  SessionExpired,
  // ordering
  NotLeader,
  // chaincode
  Duplicate,
  NotPending,
  NotFound,
  UnknownDoctor,
  UnknownMedicine,
  UnauthorizedMedicine,
  SlotTaken,
  ConsentRequired,
  ConsentExpired,
  InvalidTransition,
  Validation,
  Chaincode,
  // gateway
  PolicyUnsatisfied,
  Timeout,
  SizeLimit,
  Bind,
  // harness / config
  Config,
  UnknownNode,
  // loadtest
  EmptyInput,
  TargetUnreachable,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace hl
