#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lclt/commands.hpp"
#include "lclt/config.hpp"
#include "lclt/errors.hpp"
#include "lclt/parallel.hpp"
#include "lclt/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw lclt::ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw lclt::ConfigError("write failed for " + path.string());
}

// The only place that touches the output directory.
void write_outputs(const fs::path& dir, const lclt::CommandOutput& result, const nlohmann::ordered_json& metadata) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw lclt::ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::ostringstream jsonl, csv;
  lclt::write_jsonl(jsonl, result.reports);
  lclt::write_summary_csv(csv, result.reports);
  write_file(dir / "reports.jsonl", jsonl.str());
  write_file(dir / "summary.csv", csv.str());
  for (const auto& [name, content] : result.files) write_file(dir / name, content);
  write_file(dir / "metadata.json", metadata.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale verification of the local CLT argument for lattice spin systems"};
  app.require_subcommand(1, 1);

  std::string config_path;
  lclt::FlagOverrides flags;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", flags.out, "output directory (overrides output_dir)");
  app.add_option("--seed", flags.seed, "top-level seed");
  app.add_option("--t-points", flags.t_points, "points per t-grid");
  app.add_option("--c-variant", flags.c_variant, "decay constant variant")
      ->check(CLI::IsMember({"stated", "proved"}));
  app.add_option("--budget", flags.budget, "maximum number of enumerated states");

  for (const auto& name : lclt::command_names()) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  lclt::RunConfig cfg;
  try {
    cfg = lclt::load_run_config(config_path);
    lclt::apply_overrides(cfg, flags);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }

  const auto started = std::chrono::system_clock::now();
  const auto clock_start = std::chrono::steady_clock::now();
  lclt::CommandOutput result;
  try {
    result = lclt::run_command(command, cfg);
  } catch (const lclt::CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lclt::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "invalid input for " << command << ": " << e.what() << "\n";
    return kExitConfig;
  }
  const auto runtime_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - clock_start).count();

  nlohmann::ordered_json metadata{{"command", command},
                                  {"config", fs::absolute(config_path).string()},
                                  {"seed", cfg.seed},
                                  {"started_utc", utc_timestamp(started)},
                                  {"finished_utc", utc_timestamp(std::chrono::system_clock::now())},
                                  {"runtime_ms", runtime_ms},
                                  {"threads", lclt::worker_count()},
                                  {"report_count", result.reports.size()}};
  auto& per_report = metadata["report_runtime_ms"] = nlohmann::ordered_json::array();
  for (const auto& r : result.reports) per_report.push_back(r.runtime_ms);

  try {
    write_outputs(cfg.output_dir, result, metadata);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  std::cout << result.console;
  std::size_t failed = 0;
  for (const auto& r : result.reports) {
    if (r.enforced && !r.pass) {
      ++failed;
      std::cerr << "FAIL " << r.check_name << " " << r.parameters.dump() << "\n";
    }
  }
  std::cout << command << ": " << result.reports.size() - failed << "/" << result.reports.size()
            << " checks pass; reports in " << cfg.output_dir << "\n";
  return lclt::all_pass(result.reports) ? kExitPass : kExitFail;
}
