#pragma once
/**
 * @file commands.hpp
 * @brief The CLI subcommands as library calls: load a config, apply
 *        command-line overrides, run, and write outputs plus report.json.
 */

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "rfsim/cli/config.hpp"
#include "rfsim/cli/output.hpp"
#include "rfsim/diagnostics.hpp"
#include "rfsim/imaging.hpp"
#include "rfsim/receiver.hpp"
#include "rfsim/wavefield.hpp"

namespace rfsim::cli {

/// Command-line flags that override the config's run section.
struct Overrides {
  std::optional<std::size_t> bounces;
  std::optional<double> tol;
  std::optional<CaptureMode> mode;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  void apply(SceneConfig& cfg) const {
    if (bounces) cfg.run.max_bounces = *bounces;
    if (tol) cfg.run.tol = *tol;
    if (mode) cfg.run.mode = *mode;
    if (seed) cfg.run.rng_seed = *seed;
    if (threads) cfg.run.threads = *threads;
  }
};

enum class SweepKind { Aperture, Bandwidth, ObjectSize, PatchWidth };

inline SweepKind parse_sweep_kind(const std::string& s) {
  if (s == "aperture") return SweepKind::Aperture;
  if (s == "bandwidth") return SweepKind::Bandwidth;
  if (s == "objectsize") return SweepKind::ObjectSize;
  if (s == "patchwidth") return SweepKind::PatchWidth;
  throw ConfigError("sweep kind", "unknown sweep '" + s + "' (expected aperture, bandwidth, objectsize or patchwidth)");
}

namespace detail {

inline SceneConfig prepare(const std::filesystem::path& config_path, const Overrides& overrides) {
  auto cfg = load_config(config_path);
  overrides.apply(cfg);
  validate(cfg);
  return cfg;
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void finish(RunReport& report, const Diagnostics& diag, const Stopwatch& clock,
                   const std::filesystem::path& out_dir) {
  report.warnings = diag.entries();
  report.wall_time_s = clock.seconds();
  write_file(out_dir / "report.json", report.to_json().dump(2) + "\n");
}

inline void write_image_csv(const std::filesystem::path& path, const RfImage& image, const AntennaArray& array) {
  CsvWriter csv(path, {"antenna", "x", "y", "f", "re", "im"});
  for (std::size_t k = 0; k < image.antennas; ++k)
    for (std::size_t f = 0; f < image.freqs_hz.size(); ++f) {
      const Phasor v = image.at(k, f);
      csv.row(std::vector<std::string>{std::to_string(k), format_double(array.positions[k].x),
                                       format_double(array.positions[k].y), format_double(image.freqs_hz[f]),
                                       format_double(v.real()), format_double(v.imag())});
    }
  csv.close();
}

struct CaptureResult {
  Scene scene;
  AntennaArray array;
  RfImage image;
};

inline CaptureResult do_capture(const SceneConfig& cfg, Diagnostics& diag) {
  if (!cfg.array) throw ConfigError("array", "this command needs an antenna array");
  Scene scene = cfg.build_scene();
  AntennaArray array = cfg.array->build();
  RfImage image = capture(scene, cfg.emitter, array, cfg.run.mode, cfg.run.render_options(), cfg.run.rng_seed, &diag);
  return {std::move(scene), std::move(array), std::move(image)};
}

inline nlohmann::json capture_extra(const SceneConfig& cfg, const RfImage& image) {
  return {{"mode", to_string(image.mode)},
          {"rng_seed", cfg.run.rng_seed},
          {"phase_offset_rad", image.phase_offset_rad},
          {"max_bounces", cfg.run.max_bounces},
          {"tol", cfg.run.tol},
          {"threads", cfg.run.threads}};
}

}  // namespace detail

/// field_<f>.csv and field_<f>.pgm per frequency, plus report.json.
inline RunReport run_render(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                            const Overrides& overrides = {}) {
  detail::Stopwatch clock;
  const auto cfg = detail::prepare(config_path, overrides);
  if (!cfg.grid) throw ConfigError("grid", "render needs an observation grid");
  detail::ensure_dir(out_dir);

  Diagnostics diag;
  const Scene scene = cfg.build_scene();
  const auto components = source_components(cfg.emitter);
  const auto maps = render_field(scene, components, *cfg.grid, cfg.run.render_options(), &diag);
  for (const auto& map : maps) {
    const std::string label = frequency_label(map.freq_hz);
    write_field_csv(out_dir / ("field_" + label + ".csv"), map);
    write_file(out_dir / ("field_" + label + ".pgm"), encode_pgm(map));
  }

  RunReport report{"render", 0.0, scene.patch_count(), maps.size(), {}, {}};
  report.extra = {{"max_bounces", cfg.run.max_bounces},
                  {"tol", cfg.run.tol},
                  {"include_direct", cfg.run.include_direct},
                  {"threads", cfg.run.threads}};
  detail::finish(report, diag, clock, out_dir);
  return report;
}

/// image.csv with columns antenna, x, y, f, re, im.
inline RunReport run_capture(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                             const Overrides& overrides = {}) {
  detail::Stopwatch clock;
  const auto cfg = detail::prepare(config_path, overrides);
  detail::ensure_dir(out_dir);
  Diagnostics diag;
  const auto result = detail::do_capture(cfg, diag);
  detail::write_image_csv(out_dir / "image.csv", result.image, result.array);

  RunReport report{"capture", 0.0, result.scene.patch_count(), result.image.freqs_hz.size(), {}, {}};
  report.extra = detail::capture_extra(cfg, result.image);
  detail::finish(report, diag, clock, out_dir);
  return report;
}

/// Capture, then spectrum_<f>.csv (angle_deg, power) per frequency.
inline RunReport run_beamform(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                              const Overrides& overrides = {}) {
  detail::Stopwatch clock;
  const auto cfg = detail::prepare(config_path, overrides);
  detail::ensure_dir(out_dir);
  Diagnostics diag;
  const auto result = detail::do_capture(cfg, diag);
  detail::write_image_csv(out_dir / "image.csv", result.image, result.array);

  const auto angles = angle_grid(deg_to_rad(cfg.analysis.first_deg), deg_to_rad(cfg.analysis.last_deg),
                                 deg_to_rad(cfg.analysis.step_deg));
  nlohmann::json peaks = nlohmann::json::array();
  for (double f : result.image.freqs_hz) {
    const auto spec = delay_and_sum(result.image, result.array, angles, f, &diag);
    CsvWriter csv(out_dir / ("spectrum_" + frequency_label(f) + ".csv"), {"angle_deg", "power"});
    for (std::size_t i = 0; i < angles.size(); ++i) csv.row(std::vector<double>{rad_to_deg(angles[i]), spec.power[i]});
    csv.close();
    const auto best = std::max_element(spec.power.begin(), spec.power.end()) - spec.power.begin();
    peaks.push_back({{"freq_hz", f}, {"peak_angle_deg", rad_to_deg(angles[static_cast<std::size_t>(best)])}});
  }

  RunReport report{"beamform", 0.0, result.scene.patch_count(), result.image.freqs_hz.size(), {}, {}};
  report.extra = detail::capture_extra(cfg, result.image);
  report.extra["peaks"] = peaks;
  detail::finish(report, diag, clock, out_dir);
  return report;
}

/// Capture, then range_profile.csv (delay_s, power) for analysis.antenna.
inline RunReport run_range_profile(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                                   const Overrides& overrides = {}) {
  detail::Stopwatch clock;
  const auto cfg = detail::prepare(config_path, overrides);
  detail::ensure_dir(out_dir);
  Diagnostics diag;
  const auto result = detail::do_capture(cfg, diag);
  detail::write_image_csv(out_dir / "image.csv", result.image, result.array);

  if (cfg.analysis.antenna >= result.image.antennas)
    throw ConfigError("analysis.antenna", "index out of range for the array");
  RangeProfile profile;
  try {
    profile = range_profile(result.image, cfg.analysis.antenna, cfg.analysis.oversample);
  } catch (const InvalidInput& e) {
    throw ConfigError("emitter.modulation", e.what());
  }
  CsvWriter csv(out_dir / "range_profile.csv", {"delay_s", "power"});
  for (std::size_t i = 0; i < profile.delays_s.size(); ++i)
    csv.row(std::vector<double>{profile.delays_s[i], profile.power[i]});
  csv.close();

  RunReport report{"range-profile", 0.0, result.scene.patch_count(), result.image.freqs_hz.size(), {}, {}};
  report.extra = detail::capture_extra(cfg, result.image);
  report.extra["antenna"] = cfg.analysis.antenna;
  report.extra["oversample"] = cfg.analysis.oversample;
  detail::finish(report, diag, clock, out_dir);
  return report;
}

/**
 * Resolution sweeps. `config_path` may be empty, in which case built-in
 * default grids are used. Writes sweep_<kind>.csv.
 */
inline RunReport run_sweep(SweepKind kind, const std::filesystem::path& config_path,
                           const std::filesystem::path& out_dir, const Overrides& overrides = {}) {
  detail::Stopwatch clock;
  SceneConfig cfg;
  cfg.sweep = default_sweep();
  if (!config_path.empty()) cfg = detail::prepare(config_path, overrides);
  else overrides.apply(cfg);
  detail::ensure_dir(out_dir);
  const auto& sw = cfg.sweep;
  Diagnostics diag;
  RunReport report;

  switch (kind) {
    case SweepKind::Aperture: {
      report.command = "sweep aperture";
      const double target = deg_to_rad(sw.target_resolution_deg);
      CsvWriter csv(out_dir / "sweep_aperture.csv",
                    {"freq_hz", "required_aperture_m", "fixed_array_resolution_rad", "surface_feature_limit_m"});
      for (double f : sw.aperture_freqs_hz) {
        if (!(f > 0.0)) throw ConfigError("sweep.aperture_freqs_hz", "frequencies must be positive");
        const double lambda = wavelength(f);
        csv.row(std::vector<double>{f, required_aperture(lambda, target), angular_resolution(lambda, sw.fixed_aperture_m),
                                    surface_feature_limit(f)});
      }
      csv.close();
      report.extra = {{"target_resolution_deg", sw.target_resolution_deg}, {"fixed_aperture_m", sw.fixed_aperture_m}};
      break;
    }
    case SweepKind::Bandwidth: {
      report.command = "sweep bandwidth";
      CsvWriter csv(out_dir / "sweep_bandwidth.csv",
                    {"bandwidth_hz", "tof_resolution_s", "path_length_m", "round_trip_range_m"});
      for (double b : sw.bandwidths_hz) {
        if (!(b > 0.0)) throw ConfigError("sweep.bandwidths_hz", "bandwidths must be positive");
        const double dt = tof_resolution(b);
        csv.row(std::vector<double>{b, dt, kSpeedOfLight * dt, kSpeedOfLight * dt / 2.0});
      }
      csv.close();
      break;
    }
    case SweepKind::ObjectSize: {
      report.command = "sweep objectsize";
      std::vector<double> angles;
      for (double a : sw.object_angles_deg) angles.push_back(deg_to_rad(a));
      ObjectSizeTable table;
      try {
        table = object_size_sweep(sw.object_sizes_m, angles, sw.object_freq_hz, sw.object_standoff_m, cfg.run.threads);
      } catch (const InvalidInput& e) {
        throw ConfigError("sweep.object_sizes_m", e.what());
      }
      CsvWriter csv(out_dir / "sweep_objectsize.csv", {"size_m", "angle_deg", "amplitude"});
      for (std::size_t s = 0; s < table.sizes_m.size(); ++s)
        for (std::size_t a = 0; a < angles.size(); ++a)
          csv.row(std::vector<double>{table.sizes_m[s], sw.object_angles_deg[a], table.at(s, a)});
      csv.close();
      report.extra = {{"freq_hz", sw.object_freq_hz}, {"standoff_m", sw.object_standoff_m}};
      break;
    }
    case SweepKind::PatchWidth: {
      report.command = "sweep patchwidth";
      if (sw.quadrature_points < 2) throw ConfigError("sweep.quadrature_points", "must be at least 2");
      const double lambda = wavelength(sw.patch_freq_hz);
      CsvWriter csv(out_dir / "sweep_patchwidth.csv", {"width_over_lambda", "theta_deg", "normalized_magnitude"});
      for (double w : sw.widths_over_lambda) {
        if (!(w > 0.0)) throw ConfigError("sweep.widths_over_lambda", "widths must be positive");
        for (double t : sw.thetas_deg) {
          const double width = w * lambda;
          const double mag = std::abs(exact_patch_integral(width, deg_to_rad(t), sw.patch_freq_hz, sw.quadrature_points));
          csv.row(std::vector<double>{w, t, mag / width});
        }
      }
      csv.close();
      report.extra = {{"freq_hz", sw.patch_freq_hz}, {"quadrature_points", sw.quadrature_points}};
      break;
    }
  }
  detail::finish(report, diag, clock, out_dir);
  return report;
}

}  // namespace rfsim::cli
