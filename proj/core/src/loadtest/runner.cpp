#include "healthledger/loadtest/runner.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <regex>
#include <sstream>
#include <thread>

#include "healthledger/common/error.hpp"

namespace hl::loadtest {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

std::string expand(std::string text, int user, std::uint64_t seq, std::mt19937_64& rng) {
  auto replace_all = [&](const std::string& token, const std::function<std::string()>& value) {
    for (auto pos = text.find(token); pos != std::string::npos; pos = text.find(token, pos)) {
      auto v = value();
      text.replace(pos, token.size(), v);
      pos += v.size();
    }
  };
  replace_all("{user}", [&] { return std::to_string(user); });
  replace_all("{seq}", [&] { return std::to_string(seq); });
  replace_all("{rand}", [&] { return std::to_string(rng() % 1'000'000); });
  return text;
}

Json expand_json(const Json& j, int user, std::uint64_t seq, std::mt19937_64& rng) {
  if (j.is_string()) return expand(j.get<std::string>(), user, seq, rng);
  if (j.is_array() || j.is_object()) {
    auto out = j;
    for (auto& v : out) v = expand_json(v, user, seq, rng);
    return out;
  }
  return j;
}

// Thread-safe sample sink; appends only.
class Collector {
 public:
  void add(Sample s) {
    std::lock_guard lock(mutex_);
    samples_.push_back(std::move(s));
  }
  std::vector<Sample> take() {
    std::lock_guard lock(mutex_);
    return std::move(samples_);
  }

 private:
  std::mutex mutex_;
  std::vector<Sample> samples_;
};

}  // namespace

void LoadConfig::validate() const {
  if (users < 1) fail(ErrorKind::Validation, "users must be at least 1");
  if (ramp_up_s < 0) fail(ErrorKind::Validation, "ramp_up_s must not be negative");
  if (duration_s < 1) fail(ErrorKind::Validation, "duration_s must be at least 1");
  if (scenario.empty()) fail(ErrorKind::Validation, "scenario must list at least one route");
  for (const auto& r : scenario) {
    if (r.weight == 0) fail(ErrorKind::Validation, "route '" + r.name + "' has zero weight");
    if (r.method != "GET" && r.method != "POST" && r.method != "PUT") {
      fail(ErrorKind::Validation, "route '" + r.name + "' has unsupported method " + r.method);
    }
    if (!r.role.empty() && !credentials.contains(r.role)) {
      fail(ErrorKind::Validation, "route '" + r.name + "' uses unknown role '" + r.role + "'");
    }
  }
}

LoadConfig LoadConfig::from_json(const Json& j) {
  LoadConfig c;
  c.users = j.value("users", c.users);
  c.ramp_up_s = j.value("ramp_up_s", c.ramp_up_s);
  c.duration_s = j.value("duration_s", c.duration_s);
  c.target_base_url = j.value("target_base_url", c.target_base_url);
  c.seed = j.value("seed", c.seed);
  c.request_timeout_s = j.value("request_timeout_s", c.request_timeout_s);
  c.think_time_ms = j.value("think_time_ms", c.think_time_ms);
  if (j.contains("credentials")) {
    for (const auto& [role, cred] : j.at("credentials").items()) {
      c.credentials[role] = {cred.at("identity_id").get<std::string>(), cred.at("password").get<std::string>()};
    }
  }
  for (const auto& r : j.at("scenario")) {
    RouteTemplate t;
    t.method = r.value("method", t.method);
    t.path = r.at("path").get<std::string>();
    t.name = r.value("name", t.method + " " + t.path);
    t.body = r.value("body", Json(nullptr));
    t.weight = r.value("weight", 1u);
    t.role = r.value("role", std::string());
    c.scenario.push_back(std::move(t));
  }
  c.validate();
  return c;
}

LoadConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  try {
    return LoadConfig::from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    fail(ErrorKind::Validation, "bad load config: " + std::string(e.what()));
  }
}

std::int64_t activation_offset_ms(int user, int users, int ramp_up_s) {
  return static_cast<std::int64_t>(user) * ramp_up_s * 1000 / users;
}

LoadRun run_load(const LoadConfig& config) {
  config.validate();
  {
    // Plain http only; the client is built without TLS.
    static const std::regex url(R"(^http://[A-Za-z0-9.\-]+(:[0-9]{1,5})?/?$)");
    httplib::Client probe(config.target_base_url);
    if (!std::regex_match(config.target_base_url, url) || !probe.is_valid()) {
      fail(ErrorKind::TargetUnreachable, "cannot parse target " + config.target_base_url);
    }
  }

  std::uint64_t total_weight = 0;
  for (const auto& r : config.scenario) total_weight += r.weight;

  Collector sink;
  LoadRun run;
  run.activation_ms.assign(static_cast<std::size_t>(config.users), 0);
  const auto start = Clock::now();
  const auto end = start + std::chrono::seconds(config.duration_s);

  auto user_main = [&](int user) {
    std::this_thread::sleep_until(start +
                                  std::chrono::milliseconds(activation_offset_ms(user, config.users, config.ramp_up_s)));
    run.activation_ms[static_cast<std::size_t>(user)] = ms_since(start);

    httplib::Client client(config.target_base_url);
    client.set_connection_timeout(config.request_timeout_s, 0);
    client.set_read_timeout(config.request_timeout_s, 0);
    client.set_write_timeout(config.request_timeout_s, 0);
    client.set_keep_alive(true);

    std::mt19937_64 rng(config.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(user + 1)));
    std::map<std::string, std::string> tokens;
    std::uint64_t seq = 0;

    auto timed = [&](const std::string& route, const std::function<httplib::Result()>& call) {
      auto started = ms_since(start);
      auto t0 = Clock::now();
      auto res = call();
      Sample s;
      s.route = route;
      s.started_at_ms = started;
      s.latency_ms = ms_since(t0);
      s.status = res ? res->status : 0;
      s.ok = res && res->status >= 200 && res->status < 300;
      sink.add(s);
      return res;
    };

    auto token_for = [&](const std::string& role) -> std::optional<std::string> {
      if (role.empty()) return std::string();
      if (auto it = tokens.find(role); it != tokens.end()) return it->second;
      const auto& cred = config.credentials.at(role);
      Json body{{"identity_id", cred.identity_id}, {"password", cred.password}};
      auto res = timed("POST /auth/login", [&] { return client.Post("/auth/login", body.dump(), "application/json"); });
      if (!res || res->status != 200) return std::nullopt;
      auto token = Json::parse(res->body).at("token").get<std::string>();
      tokens[role] = token;
      return token;
    };

    while (Clock::now() < end) {
      auto pick = rng() % total_weight;
      const RouteTemplate* route = &config.scenario.front();
      for (const auto& r : config.scenario) {
        if (pick < r.weight) {
          route = &r;
          break;
        }
        pick -= r.weight;
      }
      ++seq;
      auto token = token_for(route->role);
      if (!token) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
        continue;
      }
      httplib::Headers headers;
      if (!token->empty()) headers.emplace("Authorization", "Bearer " + *token);
      auto path = expand(route->path, user, seq, rng);
      auto body = route->body.is_null() ? std::string() : expand_json(route->body, user, seq, rng).dump();
      auto res = timed(route->name, [&]() -> httplib::Result {
        if (route->method == "GET") return client.Get(path, headers);
        if (route->method == "PUT") return client.Put(path, headers, body, "application/json");
        return client.Post(path, headers, body, "application/json");
      });
      // An expired session is renewed on the next pass.
      if (res && res->status == 401) tokens.erase(route->role);
      if (config.think_time_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(config.think_time_ms));
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(config.users));
  for (int u = 0; u < config.users; ++u) threads.emplace_back(user_main, u);
  for (auto& t : threads) t.join();

  run.samples = sink.take();
  std::sort(run.samples.begin(), run.samples.end(), [](const Sample& a, const Sample& b) {
    return a.started_at_ms < b.started_at_ms;
  });
  return run;
}

}  // namespace hl::loadtest
