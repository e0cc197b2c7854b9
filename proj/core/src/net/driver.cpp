#include "healthledger/net/driver.hpp"

#include <chrono>

#include "healthledger/common/error.hpp"

namespace hl::net {

bool SimDriver::await(const std::function<bool(const Network&)>& pred, std::int64_t timeout_ms) {
  try {
    network_.run_until(pred, timeout_ms);
    return true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Timeout) throw;
    return false;
  }
}

LiveDriver::LiveDriver(Network& network) : network_(network), thread_([this] { pump(); }) {}

LiveDriver::~LiveDriver() { stop(); }

void LiveDriver::stop() {
  running_ = false;
  if (thread_.joinable()) thread_.join();
}

void LiveDriver::pump() {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  std::int64_t base = 0;
  {
    std::lock_guard lock(mutex_);
    base = network_.now();
  }
  // Bounded batches keep the lock short when the pump falls behind.
  constexpr int kMaxBatch = 50;
  while (running_) {
    auto target = base + std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
    bool stepped = false;
    {
      std::lock_guard lock(mutex_);
      for (int i = 0; i < kMaxBatch && network_.now() < target; ++i) {
        network_.step();
        stepped = true;
      }
    }
    if (stepped) changed_.notify_all();
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  changed_.notify_all();
}

void LiveDriver::with(const std::function<void(Network&)>& fn) {
  std::lock_guard lock(mutex_);
  fn(network_);
}

bool LiveDriver::await(const std::function<bool(const Network&)>& pred, std::int64_t timeout_ms) {
  std::unique_lock lock(mutex_);
  const auto deadline = network_.now() + timeout_ms;
  while (true) {
    if (pred(network_)) return true;
    if (network_.now() >= deadline || !running_) return false;
    changed_.wait_for(lock, std::chrono::milliseconds(20));
  }
}

std::int64_t LiveDriver::now_ms() {
  std::lock_guard lock(mutex_);
  return network_.now();
}

}  // namespace hl::net
