#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <thread>

#include "healthledger/common/error.hpp"
#include "healthledger/gateway/gateway.hpp"

namespace hl::gateway {

// Status code for a library error.
int http_status(ErrorKind kind);

/// REST front of a Gateway. Bodies are canonical JSON except documents,
/// which travel as raw bytes with their media type. Every route other than
/// login and /health needs `Authorization: Bearer <token>`.
class HttpApi {
 public:
  explicit HttpApi(Gateway& gateway);
  ~HttpApi();
  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Throws Bind.
  std::uint16_t start(const std::string& host, std::uint16_t port);
  // Blocks serving on the calling thread.
  void listen(const std::string& host, std::uint16_t port);
  void stop();
  std::uint16_t port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  std::uint16_t port_ = 0;
};

}  // namespace hl::gateway
