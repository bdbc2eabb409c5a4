#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rfsim/geometry.hpp"

namespace rfsim {
namespace {

TEST(DiscretizeSegment, FourMeterReflectorAtOneCentimeter) {
  const Segment s{{-2.0, 4.0}, {2.0, 4.0}};
  const auto patches = discretize_segment(s, 0.01);
  ASSERT_EQ(patches.size(), 400u);
  for (const auto& p : patches) EXPECT_NEAR(p.width, 0.01, 1e-15);
  EXPECT_NEAR(patches.front().midpoint.x, -1.995, 1e-12);
  EXPECT_NEAR(patches.back().midpoint.x, 1.995, 1e-12);
}

TEST(DiscretizeSegment, SinglePieceSitsAtCenter) {
  const Segment s{{0.0, 0.0}, {1.0, 0.0}};
  const auto patches = discretize_segment(s, 1.0);
  ASSERT_EQ(patches.size(), 1u);
  EXPECT_DOUBLE_EQ(patches[0].width, 1.0);
  EXPECT_DOUBLE_EQ(patches[0].midpoint.x, 0.5);
  EXPECT_DOUBLE_EQ(patches[0].midpoint.y, 0.0);
}

TEST(DiscretizeSegment, RemainderSpreadEvenly) {
  const Segment s{{0.0, 0.0}, {0.035, 0.0}};
  const auto patches = discretize_segment(s, 0.01);
  ASSERT_EQ(patches.size(), 4u);
  for (const auto& p : patches) EXPECT_NEAR(p.width, 0.00875, 1e-15);
}

TEST(DiscretizeSegment, DegenerateAndBadWidthThrow) {
  EXPECT_THROW(discretize_segment(Segment{{1.0, 1.0}, {1.0, 1.0}}, 0.1), InvalidInput);
  EXPECT_THROW(discretize_segment(Segment{{0.0, 0.0}, {1.0, 0.0}}, 0.0), InvalidInput);
  EXPECT_THROW(discretize_segment(Segment{{0.0, 0.0}, {1.0, 0.0}}, -1.0), InvalidInput);
}

TEST(DiscretizeSegment, NormalFollowsSide) {
  Segment s{{0.0, 0.0}, {1.0, 0.0}};
  s.side = NormalSide::Left;
  EXPECT_DOUBLE_EQ(discretize_segment(s, 0.5)[0].normal.y, 1.0);
  s.side = NormalSide::Right;
  EXPECT_DOUBLE_EQ(discretize_segment(s, 0.5)[0].normal.y, -1.0);
}

TEST(DiscretizeSegment, TilingAndRefinementProperties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> width(0.003, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const Segment s{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
    const double w = width(rng);
    const auto patches = discretize_segment(s, w);
    const Vec2 dir = unit(s.b - s.a);

    double total = 0.0;
    for (std::size_t i = 0; i < patches.size(); ++i) {
      total += patches[i].width;
      EXPECT_LE(patches[i].width, w * (1.0 + 1e-12));
      EXPECT_NEAR(patches[i].normal.norm(), 1.0, 1e-12);
      if (i > 0) {
        const Vec2 step = patches[i].midpoint - patches[i - 1].midpoint;
        EXPECT_NEAR(step.norm(), patches[i].width, 1e-9 * s.length());
        EXPECT_NEAR(dot(step, dir), patches[i].width, 1e-9 * s.length());
      }
    }
    EXPECT_NEAR(total, s.length(), 1e-9 * s.length());
  }

  // Halving the width doubles the count whenever length / width is an integer.
  const Segment s{{0.0, 0.0}, {3.0, 4.0}};
  for (int n : {1, 3, 10, 125}) {
    const double w = 5.0 / n;
    EXPECT_EQ(discretize_segment(s, w).size(), static_cast<std::size_t>(n));
    EXPECT_EQ(discretize_segment(s, w / 2.0).size(), static_cast<std::size_t>(2 * n));
  }
}

TEST(Visible, EmptySceneSeesEverything) {
  const Scene scene;
  EXPECT_TRUE(visible(scene, {0.0, 0.0}, {3.0, -1.0}));
}

TEST(Visible, OccluderAcrossThePath) {
  const Scene scene({Segment{{-1.0, 2.0}, {1.0, 2.0}}}, 1.0);
  EXPECT_FALSE(visible(scene, {0.0, 0.0}, {0.0, 4.0}));
}

TEST(Visible, OccluderBesideThePath) {
  const Scene scene({Segment{{1.0, 2.0}, {2.0, 2.0}}}, 1.0);
  EXPECT_TRUE(visible(scene, {0.0, 0.0}, {0.0, 4.0}));
}

TEST(Visible, EndpointsOnSegmentsAreIgnored) {
  // A patch midpoint on a wall must still see points on its own side.
  const Scene scene({Segment{{-1.0, 2.0}, {1.0, 2.0}}}, 1.0);
  EXPECT_TRUE(visible(scene, {0.5, 2.0}, {0.0, 0.0}));
  EXPECT_TRUE(visible(scene, {0.0, 0.0}, {0.5, 2.0}));
}

TEST(Visible, GrazingAnEndpointBlocks) {
  const Scene scene({Segment{{0.0, 2.0}, {1.0, 2.0}}}, 1.0);
  EXPECT_FALSE(visible(scene, {0.0, 0.0}, {0.0, 4.0}));
}

TEST(Visible, CollinearOverlapBlocks) {
  const Scene scene({Segment{{0.0, 1.0}, {0.0, 2.0}}}, 1.0);
  EXPECT_FALSE(visible(scene, {0.0, 0.0}, {0.0, 4.0}));
  EXPECT_TRUE(visible(scene, {0.0, 2.5}, {0.0, 4.0}));
}

TEST(Visible, CoincidentPointsThrow) {
  const Scene scene;
  EXPECT_THROW(visible(scene, {1.0, 1.0}, {1.0, 1.0}), InvalidInput);
}

TEST(Visible, SymmetricForRandomPairs) {
  const Scene scene({Segment{{-1.0, 2.0}, {1.0, 2.0}}, Segment{{2.0, -1.0}, {2.5, 3.0}},
                     Segment{{-3.0, 0.0}, {-1.0, 1.0}}},
                    1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-4.0, 4.0);
  int blocked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec2 p{coord(rng), coord(rng)};
    const Vec2 q{coord(rng), coord(rng)};
    const bool pq = visible(scene, p, q);
    EXPECT_EQ(pq, visible(scene, q, p));
    blocked += pq ? 0 : 1;
  }
  EXPECT_GT(blocked, 100);  // the generator actually exercises occlusion
}

TEST(EmissionCosine, AlongNormalPerpendicularAndBehind) {
  const Patch patch{{0.0, 0.0}, {0.0, 1.0}, 0.01};
  EXPECT_DOUBLE_EQ(emission_cosine(patch, {0.0, 3.0}), 1.0);
  EXPECT_NEAR(emission_cosine(patch, {2.0, 0.0}), 0.0, 1e-15);
  // theta = 135 degrees: raw dot product is -sqrt(2)/2, clamped to 0.
  EXPECT_EQ(emission_cosine(patch, {1.0, -1.0}), 0.0);
  EXPECT_THROW(emission_cosine(patch, {0.0, 0.0}), InvalidInput);
}

TEST(EmissionCosine, AlwaysInUnitInterval) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = angle(rng);
    const Patch patch{{coord(rng), coord(rng)}, {std::cos(a), std::sin(a)}, 0.01};
    const double c = emission_cosine(patch, {coord(rng), coord(rng)});
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(AcceptsIncidence, ReflectiveFrontApertureBack) {
  Patch patch{{0.0, 0.0}, {0.0, 1.0}, 0.01};
  EXPECT_TRUE(accepts_incidence(patch, {0.0, 2.0}));
  EXPECT_FALSE(accepts_incidence(patch, {0.0, -2.0}));
  EXPECT_FALSE(accepts_incidence(patch, {2.0, 0.0}));
  patch.interaction = Interaction::Aperture;
  EXPECT_FALSE(accepts_incidence(patch, {0.0, 2.0}));
  EXPECT_TRUE(accepts_incidence(patch, {0.0, -2.0}));
}

TEST(Scene, PatchesTileSegmentsWithValidParents) {
  const Scene scene({Segment{{0.0, 0.0}, {1.0, 0.0}}, Segment{{0.0, 1.0}, {0.0, 2.0}}},
                    std::vector<double>{0.1, 0.25});
  ASSERT_EQ(scene.patch_count(), 14u);
  for (const auto& p : scene.patches()) EXPECT_LT(p.parent_segment, scene.segments().size());
  EXPECT_EQ(scene.patches()[9].parent_segment, 0u);
  EXPECT_EQ(scene.patches()[10].parent_segment, 1u);
  EXPECT_THROW(Scene({Segment{{0.0, 0.0}, {1.0, 0.0}}}, std::vector<double>{}), InvalidInput);
}

}  // namespace
}  // namespace rfsim
