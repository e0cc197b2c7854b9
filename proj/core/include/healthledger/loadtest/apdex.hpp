#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hl::loadtest {

struct Sample {
  std::string route;
  std::int64_t started_at_ms = 0;  // from test start
  std::int64_t latency_ms = 0;
  bool ok = false;
  int status = 0;  // 0 when no response arrived

  bool operator==(const Sample&) const = default;
};

inline constexpr std::int64_t kDefaultT = 500;
inline constexpr std::int64_t kDefaultF = 1500;
inline constexpr std::int64_t kSeriesWindowMs = 10'000;

struct SeriesPoint {
  std::int64_t window_start_s = 0;
  std::uint64_t success = 0;
  std::uint64_t failure = 0;
  double tx_per_sec = 0;  // successes per second in the window

  bool operator==(const SeriesPoint&) const = default;
};

struct ApdexReport {
  std::int64_t t_ms = kDefaultT;
  std::int64_t f_ms = kDefaultF;
  std::uint64_t total = 0;
  std::uint64_t satisfied = 0;   // ok, latency <= T
  std::uint64_t tolerating = 0;  // ok, T < latency <= F
  std::uint64_t frustrated = 0;  // latency > F, or failed
  double apdex = 0;
  // Latency buckets over the same edges; failures counted apart.
  std::uint64_t bucket_le_t = 0;
  std::uint64_t bucket_t_to_f = 0;
  std::uint64_t bucket_gt_f = 0;
  std::uint64_t bucket_failed = 0;
  double pass_pct = 0;
  double fail_pct = 0;
  std::vector<SeriesPoint> series;

  bool operator==(const ApdexReport&) const = default;
};

// Throws EmptyInput for no samples, Validation when F < T or T < 0.
ApdexReport apdex_score(const std::vector<Sample>& samples, std::int64_t t_ms = kDefaultT,
                        std::int64_t f_ms = kDefaultF);

// Same figures from bucket counts alone (no series).
ApdexReport apdex_from_counts(std::uint64_t le_t, std::uint64_t t_to_f, std::uint64_t gt_f, std::uint64_t failed,
                              std::int64_t t_ms = kDefaultT, std::int64_t f_ms = kDefaultF);

enum class ReportFormat { Text, Csv };
ReportFormat parse_format(std::string_view text);
std::string render_report(const ApdexReport& report, ReportFormat format);

// Sample CSV: route,started_at_ms,latency_ms,ok,status
std::string samples_to_csv(const std::vector<Sample>& samples);
std::vector<Sample> samples_from_csv(std::string_view text);

}  // namespace hl::loadtest
