#pragma once
/**
 * @file wavefield.hpp
 * @brief Per-frequency phasor propagation, wavelet-patch response,
 *        multi-bounce exchange between patches, and field rendering.
 *
 * All values are phasors: the exp(i 2 pi f t) time factor is implicit and
 * never stored, and a propagation delay d/c becomes exp(-i 2 pi d / lambda).
 *
 * Ordering guarantee: every sum over sources and patches is accumulated in
 * index order on a single thread, so results are bit-identical for any
 * `threads` setting.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rfsim/diagnostics.hpp"
#include "rfsim/emitter.hpp"
#include "rfsim/error.hpp"
#include "rfsim/geometry.hpp"
#include "rfsim/parallel.hpp"
#include "rfsim/quadrature.hpp"

namespace rfsim {

/// Patch counts above this use matrix-free exchange instead of a dense matrix.
inline constexpr std::size_t kDenseExchangeLimit = 4096;
/// A bounce term larger than this multiple of the direct field aborts the solve.
inline constexpr double kDivergenceRatio = 1e6;

/// Free-space Green's factor exp(-i 2 pi r / lambda) / r.
inline Phasor free_space(double r, double freq_hz) {
  const double cycles = r * freq_hz / kSpeedOfLight;
  const double frac = cycles - std::floor(cycles);
  return std::polar(1.0 / r, -kTwoPi * frac);
}

/// (A / r) exp(-i 2 pi r / lambda), r = |target - source|.
inline Phasor propagate(Phasor amplitude, const Vec2& source, const Vec2& target, double freq_hz) {
  if (!(freq_hz > 0.0)) throw InvalidInput("propagate: frequency must be positive");
  const double r = distance(source, target);
  if (r <= kSingularDistance) throw InvalidInput("propagate: source and target coincide");
  return amplitude * free_space(r, freq_hz);
}

/**
 * Wavelet-patch re-emission toward `target`:
 * incident * alpha * S * cos(theta) * exp(-i 2 pi R / lambda) / R.
 * Warns (does not fail) when the patch is wider than lambda / 10.
 */
inline Phasor patch_response(const Patch& patch, Phasor incident, const Vec2& target, double freq_hz,
                             Diagnostics* diag = nullptr) {
  const double lambda = wavelength(freq_hz);
  const double r = distance(patch.midpoint, target);
  if (r <= kSingularDistance) throw InvalidInput("patch_response: target coincides with patch midpoint");
  if (patch.width > lambda / 10.0)
    warn(diag, "patch wider than lambda/10; wavelet approximation degrades");
  const double c = emission_cosine(patch, target);
  return incident * patch.alpha * patch.width * c * free_space(r, freq_hz);
}

/// W * sinc(pi W sin(theta) / lambda): closed form of the flat-patch integral.
inline double patch_integral_closed_form(double width, double theta, double freq_hz) {
  const double x = kPi * width * std::sin(theta) / wavelength(freq_hz);
  if (std::abs(x) < 1e-300) return width;
  return width * std::sin(x) / x;
}

/**
 * Integral of exp(i 2 pi s sin(theta) / lambda) over s in [-W/2, W/2],
 * by Gauss-Legendre quadrature with `quadrature_points` nodes.
 */
inline Phasor exact_patch_integral(double width, double theta, double freq_hz,
                                   std::size_t quadrature_points) {
  if (quadrature_points < 2) throw InvalidInput("exact_patch_integral: need at least 2 quadrature points");
  if (!(width >= 0.0)) throw InvalidInput("exact_patch_integral: width must be non-negative");
  const double k = kTwoPi * std::sin(theta) / wavelength(freq_hz);
  const auto rule = gauss_legendre(quadrature_points);
  const double half = width / 2.0;
  Phasor sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * std::polar(1.0, k * half * rule.nodes[i]);
  return sum * half;
}

struct PointSource {
  Vec2 position;
  Phasor amplitude;
};

/// One frequency component radiated from a position.
struct SourceComponent {
  Vec2 position;
  FrequencyComponent component;
};

/// Expands an emitter into (position, component) pairs.
inline std::vector<SourceComponent> source_components(const Emitter& e) {
  std::vector<SourceComponent> out;
  for (const auto& c : frequency_components(e)) out.push_back({e.position, c});
  return out;
}

struct FrequencyGroup {
  double freq_hz = 0.0;
  std::vector<PointSource> sources;
};

/// Groups components by exact frequency, ascending; sources keep input order.
inline std::vector<FrequencyGroup> group_by_frequency(std::span<const SourceComponent> components) {
  std::vector<FrequencyGroup> groups;
  for (const auto& sc : components) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const FrequencyGroup& g) { return g.freq_hz == sc.component.freq_hz; });
    if (it == groups.end()) {
      groups.push_back({sc.component.freq_hz, {}});
      it = std::prev(groups.end());
    }
    it->sources.push_back({sc.position, sc.component.amplitude});
  }
  std::stable_sort(groups.begin(), groups.end(),
                   [](const FrequencyGroup& a, const FrequencyGroup& b) { return a.freq_hz < b.freq_hz; });
  return groups;
}

/// Incident amplitude L[k] and source strength alpha * S * L[k] per patch.
struct PatchField {
  double freq_hz = 0.0;
  std::vector<Phasor> incident;
  std::vector<Phasor> emitted;
  std::size_t bounces = 0;  ///< bounce terms actually added
};

/**
 * Coupling into patch k from patch j:
 * g[k,j] * rho[k,j] * exp(-i 2 pi d_kj / lambda), with g = visible / d_kj and
 * rho = alpha_j * S_j * cos(theta_kj). Zero on the diagonal, when either
 * patch faces away, or when the path is occluded.
 */
inline Phasor exchange_entry(const Scene& scene, std::size_t k, std::size_t j, double freq_hz) {
  if (k == j) return {0.0, 0.0};
  const Patch& into = scene.patches()[k];
  const Patch& from = scene.patches()[j];
  if (from.alpha == Phasor{0.0, 0.0}) return {0.0, 0.0};
  const double d = distance(from.midpoint, into.midpoint);
  if (d <= kSingularDistance) return {0.0, 0.0};
  const double c = emission_cosine(from, into.midpoint);
  if (c <= 0.0) return {0.0, 0.0};
  if (!accepts_incidence(into, from.midpoint)) return {0.0, 0.0};
  if (!scene.visible(from.midpoint, into.midpoint)) return {0.0, 0.0};
  return from.alpha * from.width * c * free_space(d, freq_hz);
}

/// Dense patch-to-patch coupling matrix, row k = receiving patch.
class ExchangeMatrix {
public:
  ExchangeMatrix(const Scene& scene, double freq_hz, unsigned threads = 1)
      : freq_hz_(freq_hz), n_(scene.patch_count()), entries_(n_ * n_) {
    parallel_for(n_, threads, [&](std::size_t k) {
      for (std::size_t j = 0; j < n_; ++j) entries_[k * n_ + j] = exchange_entry(scene, k, j, freq_hz);
    });
  }

  double freq_hz() const noexcept { return freq_hz_; }
  std::size_t size() const noexcept { return n_; }
  Phasor operator()(std::size_t k, std::size_t j) const { return entries_[k * n_ + j]; }

private:
  double freq_hz_;
  std::size_t n_;
  std::vector<Phasor> entries_;
};

namespace detail {

inline double max_abs(std::span<const Phasor> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/**
 * Neumann-series solve of L = E + M L.
 *
 * Adds M^b E for b = 1..max_bounces, stopping early once the largest entry of
 * the added term falls below `tol`. Throws DivergenceError when a term exceeds
 * 1e6 times the largest direct amplitude. Scenes with more than `dense_limit`
 * patches recompute couplings on the fly each bounce instead of storing them.
 */
inline PatchField solve_multibounce(const Scene& scene, std::span<const Phasor> direct, double freq_hz,
                                    std::size_t max_bounces, double tol, unsigned threads = 1,
                                    std::size_t dense_limit = kDenseExchangeLimit) {
  const std::size_t n = scene.patch_count();
  if (direct.size() != n) throw InvalidInput("solve_multibounce: direct field length must equal patch count");
  if (!(tol >= 0.0)) throw InvalidInput("solve_multibounce: tol must be non-negative");
  wavelength(freq_hz);

  PatchField field;
  field.freq_hz = freq_hz;
  field.incident.assign(direct.begin(), direct.end());

  if (max_bounces > 0 && n > 1) {
    std::optional<ExchangeMatrix> dense;
    if (n <= dense_limit) dense.emplace(scene, freq_hz, threads);
    const double direct_max = detail::max_abs(direct);

    std::vector<Phasor> prev(direct.begin(), direct.end());
    std::vector<Phasor> next(n);
    for (std::size_t b = 1; b <= max_bounces; ++b) {
      parallel_for(n, threads, [&](std::size_t k) {
        Phasor acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
          if (prev[j] == Phasor{0.0, 0.0}) continue;
          acc += (dense ? (*dense)(k, j) : exchange_entry(scene, k, j, freq_hz)) * prev[j];
        }
        next[k] = acc;
      });
      const double term_max = detail::max_abs(next);
      if (term_max > kDivergenceRatio * direct_max)
        throw DivergenceError("solve_multibounce: bounce " + std::to_string(b) +
                              " exceeds 1e6 x the direct field; the exchange series diverges");
      for (std::size_t k = 0; k < n; ++k) field.incident[k] += next[k];
      field.bounces = b;
      if (term_max < tol) break;
      std::swap(prev, next);
    }
  }

  const auto& patches = scene.patches();
  field.emitted.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    field.emitted[k] = field.incident[k] * patches[k].alpha * patches[k].width;
  return field;
}

/// Direct incident amplitude at every patch midpoint (incidence side and visibility applied).
inline std::vector<Phasor> direct_incident(const Scene& scene, std::span<const PointSource> sources,
                                           double freq_hz) {
  const auto& patches = scene.patches();
  std::vector<Phasor> direct(patches.size());
  for (std::size_t j = 0; j < patches.size(); ++j) {
    Phasor acc{0.0, 0.0};
    for (const auto& s : sources) {
      if (distance(s.position, patches[j].midpoint) <= kSingularDistance)
        throw InvalidInput("direct_incident: a source sits on a patch midpoint");
      if (!accepts_incidence(patches[j], s.position)) continue;
      if (!scene.visible(s.position, patches[j].midpoint)) continue;
      acc += propagate(s.amplitude, s.position, patches[j].midpoint, freq_hz);
    }
    direct[j] = acc;
  }
  return direct;
}

struct RenderOptions {
  std::size_t max_bounces = 0;
  double tol = 0.0;
  bool include_direct = true;
  unsigned threads = 1;
};

/// Everything needed to evaluate the field anywhere at one frequency.
struct FrequencySolution {
  double freq_hz = 0.0;
  std::vector<PointSource> sources;
  PatchField patches;
};

inline FrequencySolution solve_frequency(const Scene& scene, FrequencyGroup group, const RenderOptions& opts,
                                         Diagnostics* diag = nullptr) {
  const double lambda = wavelength(group.freq_hz);
  for (const auto& p : scene.patches()) {
    if (p.width > lambda / 10.0 && p.alpha != Phasor{0.0, 0.0}) {
      warn(diag, "patch wider than lambda/10 at " + std::to_string(group.freq_hz) +
                     " Hz; wavelet approximation degrades");
      break;
    }
  }
  const auto direct = direct_incident(scene, group.sources, group.freq_hz);
  auto field = solve_multibounce(scene, direct, group.freq_hz, opts.max_bounces, opts.tol, opts.threads);
  return {group.freq_hz, std::move(group.sources), std::move(field)};
}

/**
 * Field at `point`: visible direct paths (if requested) plus every patch's
 * re-emission. Returns nullopt when the point coincides with a source or a
 * patch midpoint.
 */
inline std::optional<Phasor> try_field_at(const Scene& scene, const FrequencySolution& sol, const Vec2& point,
                                          bool include_direct) {
  Phasor sum{0.0, 0.0};
  for (const auto& s : sol.sources) {
    const double r = distance(s.position, point);
    if (r <= kSingularDistance) return std::nullopt;
    if (include_direct && scene.visible(s.position, point)) sum += s.amplitude * free_space(r, sol.freq_hz);
  }
  const auto& patches = scene.patches();
  for (std::size_t j = 0; j < patches.size(); ++j) {
    const Patch& p = patches[j];
    const Vec2 d = point - p.midpoint;
    const double r = d.norm();
    if (r <= kSingularDistance) return std::nullopt;
    const Phasor strength = sol.patches.emitted[j];
    if (strength == Phasor{0.0, 0.0}) continue;
    const double c = std::clamp(dot(p.normal, d) / r, 0.0, 1.0);
    if (c <= 0.0) continue;
    if (!scene.visible(p.midpoint, point)) continue;
    sum += strength * c * free_space(r, sol.freq_hz);
  }
  return sum;
}

struct GridSpec {
  Vec2 origin;
  double dx = 0.0;
  double dy = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  bool operator==(const GridSpec&) const = default;

  std::size_t size() const noexcept { return nx * ny; }
  Vec2 point(std::size_t ix, std::size_t iy) const {
    return {origin.x + dx * static_cast<double>(ix), origin.y + dy * static_cast<double>(iy)};
  }
};

/// Complex field on a grid at one frequency. values[iy * nx + ix].
struct FieldMap {
  GridSpec grid;
  double freq_hz = 0.0;
  std::vector<Phasor> values;

  const Phasor& at(std::size_t ix, std::size_t iy) const { return values[iy * grid.nx + ix]; }
};

/**
 * Renders one FieldMap per distinct frequency among `components`.
 *
 * Grid points that coincide with a source or patch midpoint are set to 0 and
 * reported through `diag`.
 */
inline std::vector<FieldMap> render_field(const Scene& scene, std::span<const SourceComponent> components,
                                          const GridSpec& grid, const RenderOptions& opts,
                                          Diagnostics* diag = nullptr) {
  if (grid.nx == 0 || grid.ny == 0) throw InvalidInput("render_field: empty grid");
  if (!(grid.dx > 0.0) || !(grid.dy > 0.0)) throw InvalidInput("render_field: grid spacing must be positive");
  if (components.empty()) throw InvalidInput("render_field: no source components");

  std::vector<FieldMap> maps;
  for (auto& group : group_by_frequency(components)) {
    const auto sol = solve_frequency(scene, std::move(group), opts, diag);
    FieldMap map{grid, sol.freq_hz, std::vector<Phasor>(grid.size())};
    std::vector<unsigned char> singular(grid.size(), 0);
    parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
      const auto v = try_field_at(scene, sol, grid.point(i % grid.nx, i / grid.nx), opts.include_direct);
      if (v) {
        map.values[i] = *v;
      } else {
        singular[i] = 1;
      }
    });
    const auto bad = std::count(singular.begin(), singular.end(), 1);
    if (bad > 0)
      warn(diag, std::to_string(bad) + " grid point(s) coincide with a source or patch midpoint at " +
                     std::to_string(sol.freq_hz) + " Hz; set to 0");
    maps.push_back(std::move(map));
  }
  return maps;
}

}  // namespace rfsim
