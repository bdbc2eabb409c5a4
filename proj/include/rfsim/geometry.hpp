#pragma once
/**
 * @file geometry.hpp
 * @brief 2D scene geometry: vectors, segments, wavelet patches, visibility.
 *
 * Every scene lives in the z = 0 plane. Segments are discretized into
 * equal-width patches, each of which later acts as a point re-radiator.
 *
 * Conventions:
 *   - Segment normals are chosen by `NormalSide`: Left is the direction b - a
 *     rotated by +90 degrees, Right by -90 degrees.
 *   - A patch emits only into the half-plane its normal points at.
 *   - Reflective patches accept energy arriving on the normal side; aperture
 *     patches (openings that re-radiate transmitted energy) accept energy
 *     arriving from behind and re-emit it forward.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "rfsim/error.hpp"

namespace rfsim {

/// Speed of light in vacuum, m/s.
inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Complex amplitude of a single-frequency wave sample.
using Phasor = std::complex<double>;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
  constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  friend constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Vec2& a, const Vec2& b) { return (b - a).norm(); }
/// Counter-clockwise rotation by 90 degrees.
constexpr Vec2 perp_left(const Vec2& v) { return {-v.y, v.x}; }

inline Vec2 unit(const Vec2& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw InvalidInput("cannot normalize a zero-length vector");
  return v / n;
}

/// Points closer than this are treated as coincident (singular).
inline constexpr double kSingularDistance = 1e-12;
/// Geometric tolerance for on-segment and intersection tests, meters.
inline constexpr double kGeomEps = 1e-9;

enum class NormalSide { Left, Right };

/// How a segment's patches interact with arriving fields.
enum class Interaction {
  Reflective,  ///< re-emits toward the side it is illuminated from
  Aperture,    ///< opening in an occluder; re-emits on the far side
};

struct Segment {
  Vec2 a;
  Vec2 b;
  Phasor alpha{1.0, 0.0};
  NormalSide side = NormalSide::Left;
  Interaction interaction = Interaction::Reflective;

  bool operator==(const Segment&) const = default;

  double length() const { return distance(a, b); }

  Vec2 normal() const {
    const Vec2 left = perp_left(unit(b - a));
    return side == NormalSide::Left ? left : -left;
  }
};

struct Patch {
  Vec2 midpoint;
  Vec2 normal;          ///< unit length
  double width = 0.0;   ///< S
  Phasor alpha{1.0, 0.0};
  std::size_t parent_segment = 0;
  Interaction interaction = Interaction::Reflective;
};

/// Splits a segment into ceil(length / max_width) equal patches, a to b.
inline std::vector<Patch> discretize_segment(const Segment& segment, double max_width,
                                             std::size_t parent_index = 0) {
  if (!(max_width > 0.0) || !std::isfinite(max_width))
    throw InvalidInput("discretize_segment: max_width must be positive and finite");
  if (!segment.a.finite() || !segment.b.finite())
    throw InvalidInput("discretize_segment: non-finite endpoint");
  const double length = segment.length();
  if (!(length > 0.0)) throw InvalidInput("discretize_segment: degenerate segment (a == b)");
  if (!std::isfinite(segment.alpha.real()) || !std::isfinite(segment.alpha.imag()))
    throw InvalidInput("discretize_segment: non-finite alpha");

  // Guard against ceil(4.0000000000000001) style rounding producing a sliver.
  const double ratio = length / max_width;
  auto count = static_cast<std::size_t>(std::ceil(ratio));
  if (count > 1 && std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio)
    count = static_cast<std::size_t>(std::round(ratio));
  count = std::max<std::size_t>(count, 1);

  const Vec2 normal = segment.normal();
  const Vec2 step = (segment.b - segment.a) / static_cast<double>(count);
  const double width = length / static_cast<double>(count);

  std::vector<Patch> patches;
  patches.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) + 0.5;
    patches.push_back(Patch{segment.a + step * t, normal, width, segment.alpha, parent_index,
                            segment.interaction});
  }
  return patches;
}

/// Distance from point p to the closed segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + ab * t);
}

namespace detail {

inline int side_of(double signed_distance) {
  if (signed_distance > kGeomEps) return 1;
  if (signed_distance < -kGeomEps) return -1;
  return 0;
}

/// True when the open segment (p, q) touches the closed segment [a, b].
/// Callers guarantee neither p nor q lies on [a, b].
inline bool open_segment_hits(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const Vec2 pq = q - p;
  const double ab_len = ab.norm();
  const double pq_len = pq.norm();
  const int sp = side_of(cross(ab, p - a) / ab_len);
  const int sq = side_of(cross(ab, q - a) / ab_len);
  const int sa = side_of(cross(pq, a - p) / pq_len);
  const int sb = side_of(cross(pq, b - p) / pq_len);

  if (sp == 0 && sq == 0) {
    // Collinear: overlap of the parameter intervals along pq.
    const double ta = dot(a - p, pq) / (pq_len * pq_len);
    const double tb = dot(b - p, pq) / (pq_len * pq_len);
    const double lo = std::min(ta, tb);
    const double hi = std::max(ta, tb);
    return hi > 0.0 && lo < 1.0;
  }
  if (sp * sq > 0) return false;  // p and q strictly on the same side of the line ab
  if (sa * sb > 0) return false;  // a and b strictly on the same side of the line pq
  return true;
}

}  // namespace detail

/**
 * Scene: segments plus the patches that tile them.
 *
 * Immutable after construction; all queries are const and thread-safe.
 */
class Scene {
public:
  Scene() = default;

  /// Discretizes every segment with its own maximum patch width.
  Scene(std::vector<Segment> segments, std::span<const double> max_widths)
      : segments_(std::move(segments)) {
    if (max_widths.size() != segments_.size())
      throw InvalidInput("Scene: one max width per segment required");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      auto patches = discretize_segment(segments_[i], max_widths[i], i);
      patches_.insert(patches_.end(), patches.begin(), patches.end());
    }
  }

  Scene(std::vector<Segment> segments, double max_width) : segments_(std::move(segments)) {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      auto patches = discretize_segment(segments_[i], max_width, i);
      patches_.insert(patches_.end(), patches.begin(), patches.end());
    }
  }

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  const std::vector<Patch>& patches() const noexcept { return patches_; }
  std::size_t patch_count() const noexcept { return patches_.size(); }
  double speed_of_light() const noexcept { return kSpeedOfLight; }

  /**
   * True iff the open segment (p, q) crosses no scene segment, ignoring the
   * segments that contain p or q themselves. Symmetric in p and q.
   */
  bool visible(const Vec2& p, const Vec2& q) const {
    for (const auto& s : segments_) {
      if (point_segment_distance(p, s.a, s.b) <= kGeomEps) continue;
      if (point_segment_distance(q, s.a, s.b) <= kGeomEps) continue;
      if (detail::open_segment_hits(p, q, s.a, s.b)) return false;
    }
    return true;
  }

private:
  std::vector<Segment> segments_;
  std::vector<Patch> patches_;
};

inline bool visible(const Scene& scene, const Vec2& p, const Vec2& q) {
  if (distance(p, q) <= kSingularDistance) throw InvalidInput("visible: p and q coincide");
  return scene.visible(p, q);
}

/// max(0, cos theta) between the patch normal and the direction to target.
inline double emission_cosine(const Patch& patch, const Vec2& target) {
  const Vec2 d = target - patch.midpoint;
  const double r = d.norm();
  if (r <= kSingularDistance) throw InvalidInput("emission_cosine: target coincides with patch midpoint");
  return std::clamp(dot(patch.normal, d) / r, 0.0, 1.0);
}

/**
 * Incidence-side check: whether energy travelling from `from` to the patch
 * counts as incident. Reflective patches take arrivals from their front
 * half-plane, apertures from their back half-plane. Grazing arrivals are
 * rejected for both.
 */
inline bool accepts_incidence(const Patch& patch, const Vec2& from) {
  const double along = dot(patch.midpoint - from, patch.normal);
  return patch.interaction == Interaction::Reflective ? along < 0.0 : along > 0.0;
}

}  // namespace rfsim
