#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <fmt/format.h>

#include "serve.hpp"
#include "swarmview/runtime/metrics_io.hpp"
#include "swarmview/runtime/protocol.hpp"
#include "swarmview/runtime/runner.hpp"
#include "swarmview/runtime/scenario.hpp"

namespace fs = std::filesystem;
using namespace swarmview;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(fmt::format("{}: cannot open", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) {
    throw std::runtime_error(fmt::format("{}: cannot write", path.string()));
  }
}

void print_summary(const runtime::RunSummary& s) {
  fmt::print("ticks            {}\n", s.ticks);
  fmt::print("min d_m          {:.3f} m\n", s.min_d_m);
  fmt::print("min d_o          {:.3f} m\n", s.min_d_o);
  fmt::print("max speed        {:.3f} m/s\n", s.max_speed);
  fmt::print("max accel        {:.3f} m/s^2\n", s.max_accel);
  fmt::print("commands         {} worker, {} operator\n", s.worker_commands, s.operator_commands);
  if (const auto rate = s.success_rate()) {
    fmt::print("gesture success  {:.1f}% ({}/{})\n", 100.0 * *rate, s.worker_commands_during_gesture,
               s.worker_commands);
  }
  fmt::print("hold plans       {}\n", s.hold_plans);
  fmt::print("failures         {}\n", s.failures.size());
  for (const auto& f : s.failures) {
    fmt::print("  tick {} (t={:.2f}): {}\n", f.tick, f.t, f.reason);
  }
}

/// Runs with metrics written to out/metrics.csv (if out is set); returns the result.
runtime::RunResult execute(const runtime::Scenario& scenario, const fs::path& out,
                           const runtime::CommandScript* commands) {
  std::ofstream csv;
  std::optional<runtime::CsvMetricsWriter> writer;
  if (!out.empty()) {
    fs::create_directories(out);
    csv.open(out / "metrics.csv");
    writer.emplace(csv);
  }
  const auto sink = [&](const runtime::TickReport& r) {
    if (writer) {
      writer->write(r);
    }
  };
  auto result = commands ? runtime::replay(scenario, *commands, sink) : runtime::run(scenario, sink);
  if (!out.empty()) {
    write_file(out / "commands.json", runtime::write_command_script(result.commands));
    write_file(out / "summary.json", runtime::summary_json(result.summary, result.events));
  }
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Human-centric UAV formation simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run a scenario offline");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out_dir, "Directory for metrics.csv, commands.json and summary.json");
  run->add_option("--duration", duration, "Override the run length in seconds")->check(CLI::PositiveNumber);

  std::string commands_path;
  auto* replay = app.add_subcommand("replay", "Re-run a scenario from a recorded command script");
  replay->add_option("scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  replay->add_option("commands", commands_path, "commands.json from a previous run")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--seed", seed, "Override the scenario seed");
  replay->add_option("--out", out_dir, "Output directory");
  replay->add_option("--duration", duration, "Override the run length in seconds")->check(CLI::PositiveNumber);

  tools::ServeOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "Run a scenario live over WebSocket");
  serve->add_option("scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", serve_opts.port, "TCP port")->capture_default_str();
  serve->add_option("--rtf", serve_opts.rtf, "Real-time factor, 0 for unthrottled")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  serve->add_flag("--wait", serve_opts.wait_for_controller, "Hold the clock until a controller joins");
  serve->add_option("--seed", seed, "Override the scenario seed");
  serve->add_option("--duration", duration, "Override the run length in seconds")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    auto scenario = runtime::load_scenario(scenario_path);
    if (seed) {
      scenario.seed = *seed;
    }
    if (duration) {
      scenario.duration = *duration;
      std::erase_if(scenario.operator_commands, [&](const auto& c) { return c.t > *duration; });
      scenario.validate();
    }
    if (*run) {
      const auto result = execute(scenario, out_dir, nullptr);
      print_summary(result.summary);
      return result.summary.failures.empty() ? 0 : 3;
    }
    if (*replay) {
      const auto script = runtime::read_command_script(read_file(commands_path));
      const auto result = execute(scenario, out_dir, &script);
      print_summary(result.summary);
      return result.summary.failures.empty() ? 0 : 3;
    }
    return tools::serve(scenario, serve_opts);
  } catch (const runtime::ScenarioError& e) {
    fmt::print(stderr, "scenario error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
