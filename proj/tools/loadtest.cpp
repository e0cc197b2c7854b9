// loadtest: drive the REST gateway with virtual users and score the samples.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iterator>

#include "healthledger/common/error.hpp"
#include "healthledger/loadtest/apdex.hpp"
#include "healthledger/loadtest/runner.hpp"

using namespace hl;
using namespace hl::loadtest;

namespace {

int run_cmd(const std::string& config_file, const std::string& target, int users, int duration,
            const std::string& out, const std::string& format) {
  auto config = load_config(config_file);
  if (!target.empty()) config.target_base_url = target;
  if (users > 0) config.users = users;
  if (duration > 0) config.duration_s = duration;
  config.validate();
  std::fprintf(stderr, "%d users, %d s ramp, %d s against %s\n", config.users, config.ramp_up_s, config.duration_s,
               config.target_base_url.c_str());
  auto run = run_load(config);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::Io, "cannot write " + out);
    f << samples_to_csv(run.samples);
  }
  if (run.samples.empty()) fail(ErrorKind::EmptyInput, "no samples recorded");
  std::fputs(render_report(apdex_score(run.samples), parse_format(format)).c_str(), stdout);
  return 0;
}

int report_cmd(const std::string& in, std::int64_t t, std::int64_t f, const std::string& format) {
  std::ifstream file(in, std::ios::binary);
  if (!file) fail(ErrorKind::NotFound, "cannot read " + in);
  std::string text{std::istreambuf_iterator<char>(file), {}};
  std::fputs(render_report(apdex_score(samples_from_csv(text), t, f), parse_format(format)).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"load generator and APDEX report"};
  app.require_subcommand(1);

  std::string config_file = "config/loadtest.json", target, out, format = "text";
  int users = 0, duration = 0;
  auto* run = app.add_subcommand("run", "run a load test and print the report");
  run->add_option("-c,--config", config_file, "load test config")->check(CLI::ExistingFile);
  run->add_option("--target", target, "override target_base_url");
  run->add_option("--users", users, "override the number of virtual users");
  run->add_option("--duration", duration, "override duration in seconds");
  run->add_option("-o,--out", out, "write raw samples as CSV");
  run->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

  std::string in;
  std::int64_t t = kDefaultT, f = kDefaultF;
  auto* report = app.add_subcommand("report", "score a sample CSV");
  report->add_option("-i,--in", in, "sample CSV")->required();
  report->add_option("--t", t, "satisfied threshold in ms");
  report->add_option("--f", f, "frustrated threshold in ms");
  report->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return run_cmd(config_file, target, users, duration, out, format);
    if (*report) return report_cmd(in, t, f, format);
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", std::string(to_string(e.kind())).c_str(), e.what());
    return 2;
  }
  return 0;
}
