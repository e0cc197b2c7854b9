#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <utility>

#include "healthledger/net/network.hpp"

namespace hl::net {

/// How a client advances and observes a Network. Simulation steps the
/// scheduler on demand; live mode runs it against the wall clock.
class Driver {
 public:
  virtual ~Driver() = default;

  // Runs `fn` with exclusive access to the network.
  virtual void with(const std::function<void(Network&)>& fn) = 0;
  // True once `pred` holds; false after timeout_ms of network time.
  virtual bool await(const std::function<bool(const Network&)>& pred, std::int64_t timeout_ms) = 0;
  virtual std::int64_t now_ms() = 0;

  template <class F>
  auto call(F&& fn) -> decltype(fn(std::declval<Network&>())) {
    using R = decltype(fn(std::declval<Network&>()));
    if constexpr (std::is_void_v<R>) {
      with([&](Network& n) { fn(n); });
    } else {
      std::optional<R> out;
      with([&](Network& n) { out.emplace(fn(n)); });
      return std::move(*out);
    }
  }
};

// Single-threaded: await() steps the scheduler itself.
class SimDriver : public Driver {
 public:
  explicit SimDriver(Network& network) : network_(network) {}

  void with(const std::function<void(Network&)>& fn) override { fn(network_); }
  bool await(const std::function<bool(const Network&)>& pred, std::int64_t timeout_ms) override;
  std::int64_t now_ms() override { return network_.now(); }

  Network& network() { return network_; }

 private:
  Network& network_;
};

// One pump thread maps wall-clock milliseconds onto ticks. All access goes
// through one mutex; waiters are woken after every batch of ticks.
class LiveDriver : public Driver {
 public:
  explicit LiveDriver(Network& network);
  ~LiveDriver() override;
  LiveDriver(const LiveDriver&) = delete;
  LiveDriver& operator=(const LiveDriver&) = delete;

  void with(const std::function<void(Network&)>& fn) override;
  bool await(const std::function<bool(const Network&)>& pred, std::int64_t timeout_ms) override;
  std::int64_t now_ms() override;

  void stop();

 private:
  void pump();

  Network& network_;
  std::mutex mutex_;
  std::condition_variable changed_;
  std::atomic<bool> running_{true};
  std::thread thread_;
};

}  // namespace hl::net
