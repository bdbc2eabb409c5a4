#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rfsim/imaging.hpp"

namespace rfsim {
namespace {

constexpr double kF = 2.4e9;
const double kLambda = kSpeedOfLight / kF;

/// Builds a single-frequency image directly from plane-wave or point-source phases.
RfImage image_from(const AntennaArray& array, double freq_hz, const std::vector<Vec2>& sources) {
  RfImage img;
  img.antennas = array.size();
  img.freqs_hz = {freq_hz};
  img.values.resize(array.size());
  for (std::size_t k = 0; k < array.size(); ++k)
    for (const auto& s : sources) img.values[k] += propagate({1.0, 0.0}, s, array.positions[k], freq_hz);
  return img;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

TEST(DelayAndSum, SingleAntennaIsFlat) {
  const auto array = AntennaArray::linear({0.0, 0.0}, {0.0, 0.0}, 1, 1e-6);
  const auto img = image_from(array, kF, {{3.0, 5.0}});
  const auto angles = angle_grid(deg_to_rad(-90.0), deg_to_rad(90.0), deg_to_rad(1.0));
  const auto spec = delay_and_sum(img, array, angles, kF);
  for (double p : spec.power) EXPECT_DOUBLE_EQ(p, 1.0);
}

TEST(DelayAndSum, BroadsideSourcePeaksAtZero) {
  const auto array = AntennaArray::centered({0.0, 0.0}, 1.0, 41, 1e-6);
  const auto img = image_from(array, kF, {{0.0, 1000.0}});
  const auto angles = angle_grid(deg_to_rad(-90.0), deg_to_rad(90.0), deg_to_rad(0.5));
  const auto spec = delay_and_sum(img, array, angles, kF);
  EXPECT_NEAR(rad_to_deg(angles[argmax(spec.power)]), 0.0, 1e-9);
  EXPECT_EQ(*std::max_element(spec.power.begin(), spec.power.end()), 1.0);
  for (double p : spec.power) EXPECT_GE(p, 0.0);
}

TEST(DelayAndSum, TenDegreeSourceWithTenDegreeAperture) {
  // Aperture lambda / 10deg = 0.7157 m.
  const double aperture = required_aperture(kLambda, deg_to_rad(10.0));
  const auto array = AntennaArray::centered({0.0, 0.0}, aperture, 13, 1e-6);
  const double th = deg_to_rad(10.0);
  const auto img = image_from(array, kF, {Vec2{std::sin(th), std::cos(th)} * 5000.0});
  const auto angles = angle_grid(deg_to_rad(-90.0), deg_to_rad(90.0), deg_to_rad(0.5));
  const auto spec = delay_and_sum(img, array, angles, kF);
  EXPECT_NEAR(rad_to_deg(angles[argmax(spec.power)]), 10.0, 0.5);
}

TEST(DelayAndSum, TwoSourceResolvability) {
  for (double aperture : {0.1, 0.5, 1.0}) {
    const std::size_t n = static_cast<std::size_t>(std::ceil(aperture / (kLambda / 2.0))) + 1;
    const auto array = AntennaArray::centered({0.0, 0.0}, aperture, n, 1e-6);
    const double res = kLambda / aperture;
    const auto angles = angle_grid(-kPi / 2.0, kPi / 2.0, deg_to_rad(0.1));
    for (const auto& [sep, peaks] : {std::pair{1.5, 2u}, std::pair{0.5, 1u}}) {
      const double half = sep * res / 2.0;
      const auto img = image_from(array, kF, {Vec2{std::sin(-half), std::cos(-half)} * 1e5,
                                              Vec2{std::sin(half), std::cos(half)} * 1e5});
      const auto spec = delay_and_sum(img, array, angles, kF);
      EXPECT_EQ(local_maxima(spec.power, 0.5).size(), peaks) << "aperture " << aperture << " sep " << sep;
    }
  }
}

TEST(DelayAndSum, WarnsOnSparseArray) {
  Diagnostics diag;
  const auto array = AntennaArray::centered({0.0, 0.0}, 1.0, 3, 1e-6);
  const auto img = image_from(array, kF, {{0.0, 100.0}});
  const std::vector<double> angles{0.0};
  delay_and_sum(img, array, angles, kF, &diag);
  EXPECT_TRUE(diag.contains("lambda/2"));
  EXPECT_THROW(delay_and_sum(img, array, angles, 2.5e9), InvalidInput);
}

TEST(Resolution, ClosedForms) {
  EXPECT_NEAR(required_aperture(kLambda, deg_to_rad(10.0)), 0.7157, 1e-4);
  EXPECT_NEAR(angular_resolution(kLambda, 0.1), 1.2491, 1e-4);
  EXPECT_NEAR(surface_feature_limit(kF), 0.012491, 1e-6);
  EXPECT_NEAR(surface_feature_limit(300e9), 9.993e-5, 1e-8);
  EXPECT_DOUBLE_EQ(tof_resolution(100e6), 10e-9);
  EXPECT_DOUBLE_EQ(tof_resolution(1e9), 1e-9);
  EXPECT_THROW(tof_resolution(0.0), InvalidInput);
  EXPECT_THROW(angular_resolution(kLambda, 0.0), InvalidInput);
}

TEST(Resolution, ApertureTimesResolutionIsWavelength) {
  for (double f = 1e6; f <= 300e9; f *= 3.7) {
    const double lambda = wavelength(f);
    for (double res : {0.01, 0.1, 1.0}) EXPECT_NEAR(required_aperture(lambda, res) * res, lambda, 1e-12 * lambda);
  }
}

RfImage tone_image(const std::vector<double>& freqs, const std::vector<std::pair<double, double>>& echoes) {
  // echoes: (delay seconds, amplitude)
  RfImage img;
  img.antennas = 1;
  img.freqs_hz = freqs;
  img.values.resize(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i)
    for (const auto& [tau, amp] : echoes) img.values[i] += std::polar(amp, -kTwoPi * std::fmod(freqs[i] * tau, 1.0));
  return img;
}

std::vector<double> comb(double f0, double df, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f0 + df * static_cast<double>(i);
  return out;
}

TEST(RangeProfile, ConstantImageConcentratesAtZeroDelay) {
  const auto profile = range_profile(tone_image(comb(kF, 1e6, 16), {{0.0, 1.0}}), 0);
  ASSERT_EQ(profile.power.size(), 16u);
  EXPECT_EQ(profile.power[0], 1.0);
  for (std::size_t i = 1; i < 16; ++i) EXPECT_NEAR(profile.power[i], 0.0, 1e-20);
}

TEST(RangeProfile, SingleReflectorPeakAndMainlobe) {
  const double bw = 100e6;
  const std::size_t n = 64;
  const double tau = 123.4e-9;
  const auto profile = range_profile(tone_image(comb(kF, bw / n, n), {{tau, 1.0}}), 0, 8);
  const std::size_t peak = argmax(profile.power);
  EXPECT_NEAR(profile.delays_s[peak], tau, profile.delays_s[1]);
  // -3 dB mainlobe no wider than 2 / B.
  std::size_t lo = peak;
  std::size_t hi = peak;
  while (lo > 0 && profile.power[lo - 1] >= 0.5) --lo;
  while (hi + 1 < profile.power.size() && profile.power[hi + 1] >= 0.5) ++hi;
  EXPECT_LE(profile.delays_s[hi] - profile.delays_s[lo], 2.0 / bw);
}

TEST(RangeProfile, TwoReflectorsResolvedAtTwoOverB) {
  const double bw = 100e6;
  const std::size_t n = 64;
  const auto freqs = comb(kF, bw / n, n);
  const auto two = range_profile(tone_image(freqs, {{100e-9, 1.0}, {120e-9, 1.0}}), 0, 4);
  EXPECT_EQ(local_maxima(two.power, 0.5, true).size(), 2u);
  const auto one = range_profile(tone_image(freqs, {{100e-9, 1.0}, {105e-9, 1.0}}), 0, 4);
  EXPECT_EQ(local_maxima(one.power, 0.5, true).size(), 1u);
}

TEST(RangeProfile, RejectsBadGrids) {
  EXPECT_THROW(range_profile(tone_image({kF}, {{0.0, 1.0}}), 0), InvalidInput);
  EXPECT_THROW(range_profile(tone_image({kF, kF + 1e6, kF + 3e6}, {{0.0, 1.0}}), 0), InvalidInput);
  EXPECT_THROW(range_profile(tone_image(comb(kF, 1e6, 4), {{0.0, 1.0}}), 1), InvalidInput);
  EXPECT_THROW(range_profile(tone_image(comb(kF, 1e6, 4), {{0.0, 1.0}}), 0, 0), InvalidInput);
}

TEST(LocalMaxima, FlatTopsAndEdges) {
  const std::vector<double> p{1.0, 0.2, 0.7, 0.7, 0.1, 0.9};
  EXPECT_EQ(local_maxima(p, 0.5), (std::vector<std::size_t>{0, 2, 5}));
  EXPECT_EQ(local_maxima(p, 0.8), (std::vector<std::size_t>{0, 5}));
  // Circular: index 0 (1.0) vs left neighbour 0.9, index 5 (0.9) vs right neighbour 1.0.
  EXPECT_EQ(local_maxima(p, 0.5, true), (std::vector<std::size_t>{0, 2}));
  EXPECT_TRUE(local_maxima(std::vector<double>{}, 0.0).empty());
}

TEST(ObjectSize, MonostaticMatchesHandSum) {
  const double standoff = 4.0;
  const double size = 0.3;
  const double w = surface_feature_limit(kF);
  const double amp = monostatic_reflection(size, 0.0, kF, standoff, w);
  const Segment seg{{-size / 2, standoff}, {size / 2, standoff}, {1.0, 0.0}, NormalSide::Right};
  Phasor sum{0.0, 0.0};
  for (const auto& p : discretize_segment(seg, w)) {
    const double r = p.midpoint.norm();
    sum += std::polar(p.width * (standoff / r) / (r * r), -kTwoPi * 2.0 * r / kLambda);
  }
  EXPECT_NEAR(amp, std::abs(sum), 1e-12 * std::abs(sum));
}

TEST(ObjectSize, SweepLayoutAndGuards) {
  const std::vector<double> sizes{0.5, 1.0};
  const std::vector<double> angles{0.0, deg_to_rad(20.0), deg_to_rad(40.0)};
  const auto table = object_size_sweep(sizes, angles);
  ASSERT_EQ(table.amplitude.size(), 6u);
  EXPECT_EQ(table.at(1, 2), monostatic_reflection(1.0, angles[2], kF, 4.0, surface_feature_limit(kF)));
  for (double a : table.amplitude) EXPECT_GT(a, 0.0);
  EXPECT_THROW(object_size_sweep(std::vector<double>{0.0}, angles), InvalidInput);
}

TEST(FarFieldPattern, LoneSourceIsIsotropic) {
  const std::vector<SourceComponent> comps{{{0.0, 0.0}, make_component(kF, {1.0, 0.0})}};
  const auto angles = angle_grid(-kPi / 2.0, kPi / 2.0, deg_to_rad(5.0));
  const auto pattern = far_field_pattern(Scene{}, comps, kF, {0.0, 0.0}, {0.0, 1.0}, 10.0, angles, {});
  for (double p : pattern.power) EXPECT_NEAR(p, 1.0, 1e-12);
}

}  // namespace
}  // namespace rfsim
