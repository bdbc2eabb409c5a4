#pragma once
/**
 * @file emitter.hpp
 * @brief RF source models and their per-frequency phasor decomposition.
 *
 * An emitter radiates A * exp(i 2 pi f_c t) * x(t). Every frequency in the
 * emitted spectrum is simulated independently downstream, so the useful
 * output of this module is `frequency_components`.
 */

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <variant>
#include <vector>

#include "rfsim/error.hpp"
#include "rfsim/geometry.hpp"
#include "rfsim/spectral.hpp"

namespace rfsim {

inline constexpr double kMinCarrierHz = 3e3;
inline constexpr double kMaxCarrierHz = 300e9;
inline constexpr std::size_t kMaxPulseSamples = std::size_t{1} << 24;

struct ContinuousWave {
  bool operator==(const ContinuousWave&) const = default;
};

struct Tone {
  double offset_hz = 0.0;
  Phasor amplitude{1.0, 0.0};

  bool operator==(const Tone&) const = default;
};

struct DiscreteTones {
  std::vector<Tone> tones;

  bool operator==(const DiscreteTones&) const = default;
};

/// Complex baseband samples taken at `sample_rate_hz`, starting at t = 0.
struct Pulse {
  std::vector<Phasor> samples;
  double sample_rate_hz = 0.0;

  bool operator==(const Pulse&) const = default;
};

using Modulation = std::variant<ContinuousWave, DiscreteTones, Pulse>;

struct Emitter {
  Vec2 position;
  double carrier_hz = 2.4e9;
  Phasor amplitude{1.0, 0.0};
  Modulation modulation = ContinuousWave{};

  bool operator==(const Emitter&) const = default;
};

struct FrequencyComponent {
  double freq_hz = 0.0;
  Phasor amplitude;
  double wavelength_m = 0.0;
};

inline double wavelength(double freq_hz) {
  if (!(freq_hz > 0.0)) throw InvalidInput("wavelength: frequency must be positive");
  return kSpeedOfLight / freq_hz;
}

inline FrequencyComponent make_component(double freq_hz, Phasor amplitude) {
  return {freq_hz, amplitude, wavelength(freq_hz)};
}

/// Checks the emitter's documented invariants; throws InvalidInput.
inline void validate(const Emitter& e) {
  if (!e.position.finite()) throw InvalidInput("emitter: non-finite position");
  if (!(e.carrier_hz >= kMinCarrierHz && e.carrier_hz <= kMaxCarrierHz))
    throw InvalidInput("emitter: carrier must lie in [3 kHz, 300 GHz]");
  if (!std::isfinite(e.amplitude.real()) || !std::isfinite(e.amplitude.imag()))
    throw InvalidInput("emitter: non-finite amplitude");
  if (const auto* tones = std::get_if<DiscreteTones>(&e.modulation)) {
    if (tones->tones.empty()) throw InvalidInput("emitter: DiscreteTones needs at least one tone");
  } else if (const auto* pulse = std::get_if<Pulse>(&e.modulation)) {
    if (!(pulse->sample_rate_hz > 0.0)) throw InvalidInput("emitter: pulse sample rate must be positive");
    if (pulse->samples.empty()) throw InvalidInput("emitter: pulse has no samples");
  }
}

namespace detail {

/// exp(i 2 pi cycles) with the integer part of `cycles` removed first.
inline Phasor unit_phasor_cycles(double cycles) {
  const double frac = cycles - std::floor(cycles);
  return std::polar(1.0, kTwoPi * frac);
}

}  // namespace detail

/// Baseband envelope x(t) for the emitter's modulation.
inline Phasor baseband(const Emitter& e, double t) {
  return std::visit(
      [t](const auto& m) -> Phasor {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ContinuousWave>) {
          return {1.0, 0.0};
        } else if constexpr (std::is_same_v<M, DiscreteTones>) {
          Phasor sum{0.0, 0.0};
          for (const auto& tone : m.tones)
            sum += tone.amplitude * detail::unit_phasor_cycles(tone.offset_hz * t);
          return sum;
        } else {
          // Nearest-sample hold; zero outside the sampled support.
          if (m.samples.empty() || !(m.sample_rate_hz > 0.0)) return {0.0, 0.0};
          const double index = std::round(t * m.sample_rate_hz);
          if (index < 0.0 || index >= static_cast<double>(m.samples.size())) return {0.0, 0.0};
          return m.samples[static_cast<std::size_t>(index)];
        }
      },
      e.modulation);
}

/// A * exp(i 2 pi f_c t) * x(t).
inline Phasor emitted_signal(const Emitter& e, double t) {
  return e.amplitude * detail::unit_phasor_cycles(e.carrier_hz * t) * baseband(e, t);
}

/**
 * Decomposes the emitter into independent single-frequency components.
 *
 * Pulses use the DFT on their own sample grid with 1/N scaling, so that
 * sum_k X_k exp(i 2 pi k n / N) reproduces sample n. Bins are taken in the
 * centered range k in [-floor(N/2), N - 1 - floor(N/2)] and placed at
 * f_c + k * sample_rate / N.
 */
inline std::vector<FrequencyComponent> frequency_components(const Emitter& e) {
  std::vector<FrequencyComponent> out;
  auto push = [&](double freq, Phasor amp) {
    if (!(freq > 0.0))
      throw InvalidInput("frequency_components: component frequency must be positive");
    out.push_back(make_component(freq, amp));
  };

  if (std::holds_alternative<ContinuousWave>(e.modulation)) {
    push(e.carrier_hz, e.amplitude);
  } else if (const auto* tones = std::get_if<DiscreteTones>(&e.modulation)) {
    for (const auto& tone : tones->tones) push(e.carrier_hz + tone.offset_hz, e.amplitude * tone.amplitude);
  } else {
    const auto& pulse = std::get<Pulse>(e.modulation);
    const std::size_t n = pulse.samples.size();
    if (n > kMaxPulseSamples) throw InvalidInput("frequency_components: pulse longer than 2^24 samples");
    if (n == 0 || !(pulse.sample_rate_hz > 0.0))
      throw InvalidInput("frequency_components: pulse needs samples and a positive sample rate");
    const auto spectrum = dft(pulse.samples, -1);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    const auto count = static_cast<std::ptrdiff_t>(n);
    const double bin_hz = pulse.sample_rate_hz / static_cast<double>(n);
    out.reserve(n);
    for (std::ptrdiff_t k = -half; k < count - half; ++k) {
      const auto bin = static_cast<std::size_t>((k % count + count) % count);
      push(e.carrier_hz + static_cast<double>(k) * bin_hz,
           e.amplitude * spectrum[bin] / static_cast<double>(n));
    }
  }
  return out;
}

}  // namespace rfsim
