#pragma once
/**
 * @file imaging.hpp
 * @brief Beamforming, range profiles and resolution analyses on RF images.
 *
 * Angle convention: theta is measured from the array broadside, positive
 * toward the array axis (first antenna to last). The steering direction is
 * u(theta) = cos(theta) * broadside + sin(theta) * axis.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "rfsim/diagnostics.hpp"
#include "rfsim/emitter.hpp"
#include "rfsim/error.hpp"
#include "rfsim/geometry.hpp"
#include "rfsim/parallel.hpp"
#include "rfsim/receiver.hpp"
#include "rfsim/spectral.hpp"
#include "rfsim/wavefield.hpp"

namespace rfsim {

struct AngularSpectrum {
  std::vector<double> angles_rad;
  std::vector<double> power;
  double freq_hz = 0.0;
};

struct RangeProfile {
  std::vector<double> delays_s;
  std::vector<double> power;
};

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Evenly spaced angles from `first` to `last` inclusive.
inline std::vector<double> angle_grid(double first_rad, double last_rad, double step_rad) {
  if (!(step_rad > 0.0) || last_rad < first_rad) throw InvalidInput("angle_grid: bad range");
  const auto n = static_cast<std::size_t>(std::floor((last_rad - first_rad) / step_rad + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = first_rad + step_rad * static_cast<double>(i);
  return out;
}

/// Scales so the largest entry is exactly 1 (all-zero input stays zero).
inline void normalize_to_max(std::vector<double>& power) {
  const double m = power.empty() ? 0.0 : *std::max_element(power.begin(), power.end());
  if (m > 0.0)
    for (auto& p : power) p /= m;
}

/**
 * Far-field delay-and-sum beamformer:
 * B(theta) = |sum_k I(k, f) exp(-i 2 pi (p_k . u(theta)) / lambda)|^2,
 * positions taken relative to the array centroid, normalized to max 1.
 * Warns when adjacent antennas are more than lambda / 2 apart.
 */
inline AngularSpectrum delay_and_sum(const RfImage& image, const AntennaArray& array,
                                     std::span<const double> angles_rad, double freq_hz,
                                     Diagnostics* diag = nullptr) {
  if (image.antennas != array.size()) throw InvalidInput("delay_and_sum: image and array sizes differ");
  const std::size_t fi = image.freq_index(freq_hz);
  const double lambda = wavelength(freq_hz);

  const Vec2 axis = array.axis();
  const Vec2 broadside = array.broadside();
  const Vec2 center = array.centroid();
  if (array.size() > 1) {
    std::vector<double> along;
    for (const auto& p : array.positions) along.push_back(dot(p - center, axis));
    std::sort(along.begin(), along.end());
    for (std::size_t i = 1; i < along.size(); ++i)
      if (along[i] - along[i - 1] > lambda / 2.0 * (1.0 + 1e-12)) {
        warn(diag, "antenna spacing exceeds lambda/2; beamformer output aliases");
        break;
      }
  }

  AngularSpectrum out{std::vector<double>(angles_rad.begin(), angles_rad.end()),
                      std::vector<double>(angles_rad.size()), freq_hz};
  for (std::size_t a = 0; a < angles_rad.size(); ++a) {
    const Vec2 u = broadside * std::cos(angles_rad[a]) + axis * std::sin(angles_rad[a]);
    Phasor sum{0.0, 0.0};
    for (std::size_t k = 0; k < array.size(); ++k) {
      const double path = dot(array.positions[k] - center, u);
      sum += image.at(k, fi) * std::polar(1.0, -kTwoPi * path / lambda);
    }
    out.power[a] = std::norm(sum);
  }
  normalize_to_max(out.power);
  return out;
}

/// lambda / aperture, radians.
inline double angular_resolution(double wavelength_m, double aperture_m) {
  if (!(wavelength_m > 0.0) || !(aperture_m > 0.0))
    throw InvalidInput("angular_resolution: wavelength and aperture must be positive");
  return wavelength_m / aperture_m;
}

/// Aperture needed to reach `resolution_rad`: lambda / resolution.
inline double required_aperture(double wavelength_m, double resolution_rad) {
  if (!(wavelength_m > 0.0) || !(resolution_rad > 0.0))
    throw InvalidInput("required_aperture: wavelength and resolution must be positive");
  return wavelength_m / resolution_rad;
}

/// Finest surface feature distinguishable from a point source: lambda / 10.
inline double surface_feature_limit(double freq_hz) {
  if (!(freq_hz > 0.0)) throw InvalidInput("surface_feature_limit: frequency must be positive");
  return wavelength(freq_hz) / 10.0;
}

/// Time-of-flight resolution 1 / B, seconds. Multiply by c for path length.
inline double tof_resolution(double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw InvalidInput("tof_resolution: bandwidth must be positive");
  return 1.0 / bandwidth_hz;
}

/**
 * Power versus round-trip delay for one antenna, by inverse DFT across the
 * frequency axis. The delay grid has N * oversample points of spacing
 * 1 / (N * oversample * df) over the unambiguous span 1 / df; oversample > 1
 * zero-pads the transform. Normalized to max 1.
 */
inline RangeProfile range_profile(const RfImage& image, std::size_t antenna_index, std::size_t oversample = 1) {
  const std::size_t n = image.freqs_hz.size();
  if (n < 2) throw InvalidInput("range_profile: need at least two frequencies");
  if (antenna_index >= image.antennas) throw InvalidInput("range_profile: antenna index out of range");
  if (oversample == 0) throw InvalidInput("range_profile: oversample must be at least 1");
  const double df = (image.freqs_hz.back() - image.freqs_hz.front()) / static_cast<double>(n - 1);
  if (!(df > 0.0)) throw InvalidInput("range_profile: frequencies must be ascending");
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs((image.freqs_hz[i] - image.freqs_hz[i - 1]) - df) > 1e-6 * df)
      throw InvalidInput("range_profile: frequency grid is not uniform");

  const std::size_t m = n * oversample;
  std::vector<Phasor> padded(m);
  for (std::size_t i = 0; i < n; ++i) padded[i] = image.at(antenna_index, i);
  const auto spectrum = dft(padded, +1);

  RangeProfile out{std::vector<double>(m), std::vector<double>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    out.delays_s[i] = static_cast<double>(i) / (static_cast<double>(m) * df);
    out.power[i] = std::norm(spectrum[i]);
  }
  normalize_to_max(out.power);
  return out;
}

/**
 * Indices of local maxima with power >= threshold. A maximum is strictly
 * above its left neighbour and at least its right neighbour, so a flat top
 * counts once. With `circular` the ends wrap; otherwise out-of-range
 * neighbours count as -infinity.
 */
inline std::vector<std::size_t> local_maxima(std::span<const double> power, double threshold,
                                             bool circular = false) {
  std::vector<std::size_t> out;
  const std::size_t n = power.size();
  if (n == 0) return out;
  constexpr double kFloor = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? power[i - 1] : (circular ? power[n - 1] : kFloor);
    const double right = i + 1 < n ? power[i + 1] : (circular ? power[0] : kFloor);
    if (power[i] > left && power[i] >= right && power[i] >= threshold) out.push_back(i);
  }
  return out;
}

/**
 * |field|^2 sampled on an arc of `radius` around `center`, normalized to max 1.
 * theta = 0 points along `forward`; positive theta rotates clockwise from it,
 * matching the beamformer's axis convention for a broadside of `forward`.
 */
inline AngularSpectrum far_field_pattern(const Scene& scene, std::span<const SourceComponent> components,
                                         double freq_hz, const Vec2& center, const Vec2& forward, double radius,
                                         std::span<const double> angles_rad, const RenderOptions& opts) {
  if (!(radius > 0.0)) throw InvalidInput("far_field_pattern: radius must be positive");
  FrequencyGroup group{freq_hz, {}};
  for (const auto& sc : components)
    if (sc.component.freq_hz == freq_hz) group.sources.push_back({sc.position, sc.component.amplitude});
  if (group.sources.empty()) throw InvalidInput("far_field_pattern: no source at the requested frequency");
  const auto sol = solve_frequency(scene, std::move(group), opts);

  const Vec2 fwd = unit(forward);
  const Vec2 right = -perp_left(fwd);
  AngularSpectrum out{std::vector<double>(angles_rad.begin(), angles_rad.end()),
                      std::vector<double>(angles_rad.size()), freq_hz};
  parallel_for(angles_rad.size(), opts.threads, [&](std::size_t a) {
    const Vec2 p = center + (fwd * std::cos(angles_rad[a]) + right * std::sin(angles_rad[a])) * radius;
    out.power[a] = std::norm(field_at_antenna(scene, sol, p, opts.include_direct));
  });
  normalize_to_max(out.power);
  return out;
}

/// Amplitudes indexed [size][angle].
struct ObjectSizeTable {
  std::vector<double> sizes_m;
  std::vector<double> angles_rad;
  std::vector<double> amplitude;

  double at(std::size_t size_index, std::size_t angle_index) const {
    return amplitude[size_index * angles_rad.size() + angle_index];
  }
};

/**
 * Monostatic reflector amplitude: emitter and receiving point at the origin,
 * a flat reflector of the given size parallel to the x axis at y = standoff,
 * its midpoint translated to the given angle from broadside (+y). Records
 * |single-bounce field| at the origin; the direct path is excluded.
 */
inline double monostatic_reflection(double size_m, double angle_rad, double freq_hz, double standoff_m,
                                    double max_patch_width_m) {
  if (!(size_m > 0.0)) throw InvalidInput("object_size_sweep: size must be positive");
  if (!(standoff_m > 0.0)) throw InvalidInput("object_size_sweep: standoff must be positive");
  const double xm = standoff_m * std::tan(angle_rad);
  Segment reflector{{xm - size_m / 2.0, standoff_m}, {xm + size_m / 2.0, standoff_m}, {1.0, 0.0},
                    NormalSide::Right, Interaction::Reflective};
  const Scene scene({reflector}, max_patch_width_m);

  const Vec2 origin{0.0, 0.0};
  const std::vector<PointSource> source{{origin, {1.0, 0.0}}};
  FrequencySolution sol{freq_hz, {}, {}};
  sol.patches = solve_multibounce(scene, direct_incident(scene, source, freq_hz), freq_hz, 0, 0.0);
  return std::abs(field_at_antenna(scene, sol, origin, false));
}

inline ObjectSizeTable object_size_sweep(std::span<const double> sizes_m, std::span<const double> angles_rad,
                                         double freq_hz = 2.4e9, double standoff_m = 4.0, unsigned threads = 1) {
  for (double s : sizes_m)
    if (!(s > 0.0)) throw InvalidInput("object_size_sweep: size must be positive");
  const double max_width = surface_feature_limit(freq_hz);
  ObjectSizeTable table{std::vector<double>(sizes_m.begin(), sizes_m.end()),
                        std::vector<double>(angles_rad.begin(), angles_rad.end()),
                        std::vector<double>(sizes_m.size() * angles_rad.size())};
  const std::size_t na = angles_rad.size();
  parallel_for(table.amplitude.size(), threads, [&](std::size_t i) {
    table.amplitude[i] = monostatic_reflection(sizes_m[i / na], angles_rad[i % na], freq_hz, standoff_m, max_width);
  });
  return table;
}

}  // namespace rfsim
