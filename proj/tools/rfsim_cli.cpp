// Command-line front end: render, capture, beamform, range-profile, sweep <kind>.
//
// Exit codes: 0 success, 2 config error, 3 numeric divergence, 4 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rfsim/cli/commands.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
  std::string scene;
  std::string out = "out";
  std::optional<std::size_t> bounces;
  std::optional<double> tol;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  rfsim::cli::Overrides overrides() const {
    rfsim::cli::Overrides o;
    o.bounces = bounces;
    o.tol = tol;
    o.seed = seed;
    o.threads = threads;
    if (mode) {
      if (*mode == "radar") {
        o.mode = rfsim::CaptureMode::Radar;
      } else if (*mode == "wifi") {
        o.mode = rfsim::CaptureMode::Wifi;
      } else {
        throw rfsim::ConfigError("--mode", "expected radar or wifi");
      }
    }
    return o;
  }
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool scene_required) {
  auto* scene = cmd->add_option("--scene", flags.scene, "Scene/config JSON file");
  if (scene_required) scene->required();
  cmd->add_option("--out", flags.out, "Output directory")->capture_default_str();
  cmd->add_option("--bounces", flags.bounces, "Maximum inter-patch bounces (overrides run.max_bounces)");
  cmd->add_option("--tol", flags.tol, "Bounce-series tolerance (overrides run.tol)");
  cmd->add_option("--mode", flags.mode, "Receiver phase mode: radar or wifi");
  cmd->add_option("--seed", flags.seed, "RNG seed for the wifi phase draw");
  cmd->add_option("--threads", flags.threads, "Worker thread cap")->check(CLI::PositiveNumber);
}

void print_report(const rfsim::cli::RunReport& report) {
  std::cout << report.command << ": " << report.patch_count << " patches, " << report.frequency_count
            << " frequencies, " << report.wall_time_s << " s\n";
  for (const auto& w : report.warnings) std::cerr << "warning: " << w.message << " (x" << w.count << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-domain RF light-field simulator"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* render = app.add_subcommand("render", "Render complex field maps on the configured grid");
  add_common(render, flags, true);
  auto* capture = app.add_subcommand("capture", "Capture an RF image I(antenna, f)");
  add_common(capture, flags, true);
  auto* beamform = app.add_subcommand("beamform", "Capture and delay-and-sum beamform");
  add_common(beamform, flags, true);
  auto* range = app.add_subcommand("range-profile", "Capture and compute a range profile");
  add_common(range, flags, true);
  auto* sweep = app.add_subcommand("sweep", "Resolution sweeps");
  std::string kind;
  sweep->add_option("kind", kind, "aperture | bandwidth | objectsize | patchwidth")->required();
  add_common(sweep, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    namespace cli = rfsim::cli;
    const auto overrides = flags.overrides();
    cli::RunReport report;
    if (render->parsed()) {
      report = cli::run_render(flags.scene, flags.out, overrides);
    } else if (capture->parsed()) {
      report = cli::run_capture(flags.scene, flags.out, overrides);
    } else if (beamform->parsed()) {
      report = cli::run_beamform(flags.scene, flags.out, overrides);
    } else if (range->parsed()) {
      report = cli::run_range_profile(flags.scene, flags.out, overrides);
    } else {
      report = cli::run_sweep(cli::parse_sweep_kind(kind), flags.scene, flags.out, overrides);
    }
    print_report(report);
    return 0;
  } catch (const rfsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rfsim::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rfsim::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const rfsim::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
