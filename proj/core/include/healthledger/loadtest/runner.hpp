#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "healthledger/common/canonical.hpp"
#include "healthledger/loadtest/apdex.hpp"

namespace hl::loadtest {

/// One weighted request. `path` and string values inside `body` may use
/// {user} (virtual user index), {seq} (per-user request counter) and
/// {rand} (seeded random integer).
struct RouteTemplate {
  std::string name;
  std::string method = "GET";
  std::string path;
  Json body = nullptr;
  unsigned weight = 1;
  std::string role;  // key into LoadConfig::credentials
};

struct Credentials {
  std::string identity_id;
  std::string password;
};

struct LoadConfig {
  int users = 100;
  int ramp_up_s = 10;
  int duration_s = 60;
  std::string target_base_url = "http://127.0.0.1:3000";
  std::vector<RouteTemplate> scenario;
  std::map<std::string, Credentials> credentials;
  std::uint64_t seed = 1;
  int request_timeout_s = 30;
  // Pause between requests of one user.
  int think_time_ms = 0;

  // Throws Validation.
  void validate() const;
  static LoadConfig from_json(const Json& j);
};

LoadConfig load_config(const std::filesystem::path& path);

// Activation offset of user i (0-based): i * ramp_up / users.
std::int64_t activation_offset_ms(int user, int users, int ramp_up_s);

struct LoadRun {
  std::vector<Sample> samples;
  std::vector<std::int64_t> activation_ms;  // measured per user
};

// Runs every virtual user on its own thread until duration_s has passed.
// Logins count as samples. An unreachable target yields failed samples
// rather than an exception; only a malformed URL throws TargetUnreachable.
LoadRun run_load(const LoadConfig& config);

}  // namespace hl::loadtest
