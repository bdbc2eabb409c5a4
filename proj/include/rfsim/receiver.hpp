#pragma once
/**
 * @file receiver.hpp
 * @brief Antenna arrays, demodulation, and RF image capture.
 *
 * Each antenna sums every arriving phasor (ideal omni sensor), then the
 * receiver mixes with a reference exp(-i (2 pi f t + phi)) and averages over
 * the exposure T. Radar shares its oscillator with the emitter (phi = 0); a
 * WiFi-style receiver sees one unknown phi per capture.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rfsim/diagnostics.hpp"
#include "rfsim/emitter.hpp"
#include "rfsim/error.hpp"
#include "rfsim/geometry.hpp"
#include "rfsim/parallel.hpp"
#include "rfsim/wavefield.hpp"

namespace rfsim {

struct AntennaArray {
  std::vector<Vec2> positions;
  double exposure_s = 1e-6;

  std::size_t size() const noexcept { return positions.size(); }

  /// `count` antennas at start, start + step, start + 2 step, ...
  static AntennaArray linear(Vec2 start, Vec2 step, std::size_t count, double exposure_s) {
    AntennaArray a;
    a.exposure_s = exposure_s;
    a.positions.reserve(count);
    for (std::size_t i = 0; i < count; ++i) a.positions.push_back(start + step * static_cast<double>(i));
    validate(a);
    return a;
  }

  /// `count` antennas spanning `aperture` meters along x, centered on `center`.
  static AntennaArray centered(Vec2 center, double aperture, std::size_t count, double exposure_s) {
    if (count == 1) return linear(center, {0.0, 0.0}, 1, exposure_s);
    const double step = aperture / static_cast<double>(count - 1);
    return linear(center - Vec2{aperture / 2.0, 0.0}, {step, 0.0}, count, exposure_s);
  }

  Vec2 centroid() const {
    Vec2 c;
    for (const auto& p : positions) c = c + p;
    return c / static_cast<double>(positions.size());
  }

  /// Unit vector from the first to the last antenna; +x for a single antenna.
  Vec2 axis() const {
    if (positions.size() < 2) return {1.0, 0.0};
    return unit(positions.back() - positions.front());
  }

  /// Broadside direction: the axis rotated by +90 degrees.
  Vec2 broadside() const { return perp_left(axis()); }

  /// Distance between the two extreme antennas along the axis.
  double aperture() const {
    if (positions.size() < 2) return 0.0;
    const Vec2 ax = axis();
    double lo = dot(positions.front(), ax);
    double hi = lo;
    for (const auto& p : positions) {
      lo = std::min(lo, dot(p, ax));
      hi = std::max(hi, dot(p, ax));
    }
    return hi - lo;
  }

  friend void validate(const AntennaArray& a) {
    if (a.positions.empty()) throw InvalidInput("antenna array: needs at least one antenna");
    if (!(a.exposure_s > 0.0)) throw InvalidInput("antenna array: exposure must be positive");
    for (std::size_t i = 0; i < a.positions.size(); ++i) {
      if (!a.positions[i].finite()) throw InvalidInput("antenna array: non-finite position");
      for (std::size_t j = 0; j < i; ++j)
        if (distance(a.positions[i], a.positions[j]) <= kSingularDistance)
          throw InvalidInput("antenna array: positions must be distinct");
    }
  }
};

enum class CaptureMode { Radar, Wifi };

inline std::string to_string(CaptureMode m) { return m == CaptureMode::Radar ? "radar" : "wifi"; }

/// I(x_k, f): antennas x frequencies, values[k * freqs.size() + f].
struct RfImage {
  std::vector<Phasor> values;
  std::vector<double> freqs_hz;
  std::size_t antennas = 0;
  double phase_offset_rad = 0.0;
  CaptureMode mode = CaptureMode::Radar;

  Phasor& at(std::size_t k, std::size_t f) { return values[k * freqs_hz.size() + f]; }
  const Phasor& at(std::size_t k, std::size_t f) const { return values[k * freqs_hz.size() + f]; }

  std::size_t freq_index(double freq_hz) const {
    for (std::size_t i = 0; i < freqs_hz.size(); ++i)
      if (freqs_hz[i] == freq_hz) return i;
    throw InvalidInput("RfImage: frequency " + std::to_string(freq_hz) + " Hz not captured");
  }
};

/// Field at a single antenna at one frequency; throws on a singular position.
inline Phasor field_at_antenna(const Scene& scene, const FrequencySolution& sol, const Vec2& antenna,
                               bool include_direct = true) {
  const auto v = try_field_at(scene, sol, antenna, include_direct);
  if (!v) throw InvalidInput("field_at_antenna: antenna coincides with a source or patch midpoint");
  return *v;
}

inline Phasor field_at_antenna(const Scene& scene, std::span<const SourceComponent> components,
                               const Vec2& antenna, double freq_hz, const RenderOptions& opts) {
  FrequencyGroup group{freq_hz, {}};
  for (const auto& sc : components)
    if (sc.component.freq_hz == freq_hz) group.sources.push_back({sc.position, sc.component.amplitude});
  const auto sol = solve_frequency(scene, std::move(group), opts);
  return field_at_antenna(scene, sol, antenna, opts.include_direct);
}

namespace detail {

/// sin(pi x), exactly zero for integer x.
inline double sin_pi(double x) {
  if (x == std::nearbyint(x)) return 0.0;
  return std::sin(kPi * std::fmod(x, 2.0));
}

/// cos(pi x), exactly zero for half-integer x.
inline double cos_pi(double x) {
  if (x - 0.5 == std::nearbyint(x - 0.5)) return 0.0;
  return std::cos(kPi * std::fmod(x, 2.0));
}

}  // namespace detail

/**
 * (1/T) * integral_0^T tone * exp(i 2 pi f' t) * exp(-i (2 pi f t + phi)) dt,
 * in closed form: tone * exp(-i phi) * exp(i pi x) * sin(pi x) / (pi x) with
 * x = (f' - f) T. Whole cycles of offset (x a nonzero integer) give exactly 0.
 */
inline Phasor demodulate(Phasor tone_amp, double tone_freq_hz, double ref_freq_hz, double exposure_s,
                         double phi) {
  if (!(exposure_s > 0.0)) throw InvalidInput("demodulate: exposure must be positive");
  const Phasor rotated = tone_amp * std::polar(1.0, -phi);
  const double x = (tone_freq_hz - ref_freq_hz) * exposure_s;
  if (x == 0.0) return rotated;
  const double s = detail::sin_pi(x);
  if (s == 0.0) return {0.0, 0.0};
  const double sinc = s / (kPi * x);
  return rotated * Phasor{detail::cos_pi(x) * sinc, s * sinc};
}

/// Uniform phase in [0, 2 pi) from a seed; the 53-bit mantissa draw is portable.
inline double draw_phase(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return kTwoPi * u;
}

/**
 * Captures I(x_k, f) for every antenna and every emitted frequency.
 *
 * Radar mode uses phi = 0. WiFi mode draws one phi from `rng_seed` before any
 * work starts and applies it to every antenna and frequency of the capture.
 */
inline RfImage capture(const Scene& scene, const Emitter& emitter, const AntennaArray& array, CaptureMode mode,
                       const RenderOptions& opts, std::uint64_t rng_seed, Diagnostics* diag = nullptr) {
  validate(array);
  const auto components = source_components(emitter);
  if (components.empty()) throw InvalidInput("capture: emitter has no frequency components");

  RfImage image;
  image.mode = mode;
  image.antennas = array.size();
  image.phase_offset_rad = mode == CaptureMode::Wifi ? draw_phase(rng_seed) : 0.0;

  std::vector<FrequencySolution> solutions;
  for (auto& group : group_by_frequency(components)) {
    image.freqs_hz.push_back(group.freq_hz);
    solutions.push_back(solve_frequency(scene, std::move(group), opts, diag));
  }
  image.values.resize(array.size() * solutions.size());

  const std::size_t nf = solutions.size();
  parallel_for(image.values.size(), opts.threads, [&](std::size_t cell) {
    const std::size_t k = cell / nf;
    const std::size_t f = cell % nf;
    const Phasor field = field_at_antenna(scene, solutions[f], array.positions[k], opts.include_direct);
    image.values[cell] = demodulate(field, solutions[f].freq_hz, solutions[f].freq_hz, array.exposure_s,
                                    image.phase_offset_rad);
  });
  return image;
}

}  // namespace rfsim
