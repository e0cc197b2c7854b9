#include "healthledger/loadtest/apdex.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "healthledger/common/error.hpp"

namespace hl::loadtest {

namespace {

void check_thresholds(std::int64_t t_ms, std::int64_t f_ms) {
  if (t_ms < 0) fail(ErrorKind::Validation, "T must be non-negative");
  if (f_ms < t_ms) fail(ErrorKind::Validation, "F must not be below T");
}

void finish(ApdexReport& r) {
  r.satisfied = r.bucket_le_t;
  r.tolerating = r.bucket_t_to_f;
  r.frustrated = r.bucket_gt_f + r.bucket_failed;
  r.apdex = (static_cast<double>(r.satisfied) + static_cast<double>(r.tolerating) / 2.0) / static_cast<double>(r.total);
  r.pass_pct = 100.0 * static_cast<double>(r.total - r.bucket_failed) / static_cast<double>(r.total);
  r.fail_pct = 100.0 * static_cast<double>(r.bucket_failed) / static_cast<double>(r.total);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

ApdexReport apdex_from_counts(std::uint64_t le_t, std::uint64_t t_to_f, std::uint64_t gt_f, std::uint64_t failed,
                              std::int64_t t_ms, std::int64_t f_ms) {
  check_thresholds(t_ms, f_ms);
  ApdexReport r;
  r.t_ms = t_ms;
  r.f_ms = f_ms;
  r.total = le_t + t_to_f + gt_f + failed;
  if (r.total == 0) fail(ErrorKind::EmptyInput, "no samples");
  r.bucket_le_t = le_t;
  r.bucket_t_to_f = t_to_f;
  r.bucket_gt_f = gt_f;
  r.bucket_failed = failed;
  finish(r);
  return r;
}

ApdexReport apdex_score(const std::vector<Sample>& samples, std::int64_t t_ms, std::int64_t f_ms) {
  check_thresholds(t_ms, f_ms);
  if (samples.empty()) fail(ErrorKind::EmptyInput, "no samples");
  ApdexReport r;
  r.t_ms = t_ms;
  r.f_ms = f_ms;
  r.total = samples.size();

  std::int64_t last = 0;
  for (const auto& s : samples) {
    if (s.latency_ms < 0) fail(ErrorKind::Validation, "negative latency in sample");
    last = std::max(last, s.started_at_ms);
    if (!s.ok) {
      ++r.bucket_failed;
    } else if (s.latency_ms <= t_ms) {
      ++r.bucket_le_t;
    } else if (s.latency_ms <= f_ms) {
      ++r.bucket_t_to_f;
    } else {
      ++r.bucket_gt_f;
    }
  }
  finish(r);

  r.series.resize(static_cast<std::size_t>(std::max<std::int64_t>(last, 0) / kSeriesWindowMs + 1));
  for (std::size_t i = 0; i < r.series.size(); ++i) {
    r.series[i].window_start_s = static_cast<std::int64_t>(i) * (kSeriesWindowMs / 1000);
  }
  for (const auto& s : samples) {
    auto& p = r.series[static_cast<std::size_t>(std::max<std::int64_t>(s.started_at_ms, 0) / kSeriesWindowMs)];
    (s.ok ? p.success : p.failure) += 1;
  }
  for (auto& p : r.series) p.tx_per_sec = static_cast<double>(p.success) / (kSeriesWindowMs / 1000.0);
  return r;
}

ReportFormat parse_format(std::string_view text) {
  if (text == "text") return ReportFormat::Text;
  if (text == "csv") return ReportFormat::Csv;
  fail(ErrorKind::Validation, "format must be text or csv");
}

std::string render_report(const ApdexReport& r, ReportFormat format) {
  std::ostringstream out;
  auto t = std::to_string(r.t_ms);
  auto f = std::to_string(r.f_ms);
  if (format == ReportFormat::Csv) {
    out << "section,name,value\n";
    out << "summary,t_ms," << r.t_ms << "\n";
    out << "summary,f_ms," << r.f_ms << "\n";
    out << "summary,total," << r.total << "\n";
    out << "summary,satisfied," << r.satisfied << "\n";
    out << "summary,tolerating," << r.tolerating << "\n";
    out << "summary,frustrated," << r.frustrated << "\n";
    out << "summary,apdex," << fixed(r.apdex, 6) << "\n";
    out << "summary,pass_pct," << fixed(r.pass_pct, 4) << "\n";
    out << "summary,fail_pct," << fixed(r.fail_pct, 4) << "\n";
    out << "bucket,lt_" << t << "," << r.bucket_le_t << "\n";
    out << "bucket,between_" << t << "_" << f << "," << r.bucket_t_to_f << "\n";
    out << "bucket,gt_" << f << "," << r.bucket_gt_f << "\n";
    out << "bucket,failed," << r.bucket_failed << "\n";
    for (const auto& p : r.series) {
      out << "series_success," << p.window_start_s << "," << p.success << "\n";
      out << "series_failure," << p.window_start_s << "," << p.failure << "\n";
      out << "series_tx_per_sec," << p.window_start_s << "," << fixed(p.tx_per_sec, 1) << "\n";
    }
    return out.str();
  }

  out << "Requests         " << r.total << "\n";
  out << "Passed           " << (r.total - r.bucket_failed) << " (" << fixed(r.pass_pct, 2) << "%)\n";
  out << "Failed           " << r.bucket_failed << " (" << fixed(r.fail_pct, 2) << "%)\n";
  out << "APDEX            " << fixed(r.apdex, 3) << "  (T=" << t << " ms, F=" << f << " ms)\n";
  out << "  satisfied      " << r.satisfied << "\n";
  out << "  tolerating     " << r.tolerating << "\n";
  out << "  frustrated     " << r.frustrated << "\n";
  out << "Response time\n";
  auto row = [&](const std::string& label, std::uint64_t n) {
    out << "  " << label << std::string(label.size() < 15 ? 15 - label.size() : 1, ' ') << n << "\n";
  };
  row("<= " + t + " ms", r.bucket_le_t);
  row(t + "-" + f + " ms", r.bucket_t_to_f);
  row("> " + f + " ms", r.bucket_gt_f);
  row("failed", r.bucket_failed);
  out << "Transactions per second (10 s windows)\n";
  for (const auto& p : r.series) {
    out << "  " << p.window_start_s << "s  ok=" << p.success << " failed=" << p.failure
        << " tx/s=" << fixed(p.tx_per_sec, 1) << "\n";
  }
  return out.str();
}

std::string samples_to_csv(const std::vector<Sample>& samples) {
  std::ostringstream out;
  out << "route,started_at_ms,latency_ms,ok,status\n";
  for (const auto& s : samples) {
    if (s.route.find_first_of(",\"\n") != std::string::npos) {
      fail(ErrorKind::Validation, "route names may not contain commas, quotes or newlines");
    }
    out << s.route << "," << s.started_at_ms << "," << s.latency_ms << "," << (s.ok ? 1 : 0) << "," << s.status
        << "\n";
  }
  return out.str();
}

std::vector<Sample> samples_from_csv(std::string_view text) {
  std::vector<Sample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "route,started_at_ms,latency_ms,ok,status") fail(ErrorKind::Validation, "unexpected CSV header");
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    if (cols.size() != 5) fail(ErrorKind::Validation, "line " + std::to_string(line_no) + ": expected 5 columns");
    try {
      Sample s;
      s.route = cols[0];
      s.started_at_ms = std::stoll(cols[1]);
      s.latency_ms = std::stoll(cols[2]);
      if (cols[3] != "0" && cols[3] != "1") throw std::invalid_argument("ok");
      s.ok = cols[3] == "1";
      s.status = std::stoi(cols[4]);
      out.push_back(std::move(s));
    } catch (const std::logic_error&) {
      fail(ErrorKind::Validation, "line " + std::to_string(line_no) + ": malformed sample");
    }
  }
  return out;
}

}  // namespace hl::loadtest
