#include <gtest/gtest.h>

#include <random>

#include "chainfold/core_model.hpp"

using namespace chainfold;

namespace {

FixedAngleChain closed_from(std::string_view angles) {
  FixedAngleChain c;
  c.topology = Topology::Closed;
  for (char ch : angles) c.angles.push_back(ch == 'C' ? Angle::Corner : Angle::Straight);
  return c;
}

FixedAngleChain random_chain(std::mt19937_64& rng, Topology t, std::size_t edges) {
  FixedAngleChain c;
  c.topology = t;
  const std::size_t n = t == Topology::Open ? edges - 1 : edges;
  std::bernoulli_distribution corner(0.6);
  for (std::size_t i = 0; i < n; ++i) c.angles.push_back(corner(rng) ? Angle::Corner : Angle::Straight);
  return c;
}

}  // namespace

TEST(Segments, OctagonWithTwoStraights) {
  auto c = closed_from("CCSCCCSC");
  auto d = segments_of(c);
  EXPECT_EQ(d, (SegmentDecomposition{Topology::Closed, {1, 2, 1, 1, 2, 1}}));
  EXPECT_EQ(d.lengths, (std::vector<std::int64_t>{1, 1, 2, 1, 1, 2}));
  EXPECT_EQ(d.total_length(), 8);
}

TEST(Segments, OpenSingleStraight) {
  FixedAngleChain c{Topology::Open, {Angle::Straight}, std::nullopt};
  EXPECT_EQ(segments_of(c).lengths, (std::vector<std::int64_t>{2}));
}

TEST(Segments, UnitSquare) {
  EXPECT_EQ(segments_of(closed_from("CCCC")).lengths, (std::vector<std::int64_t>{1, 1, 1, 1}));
}

TEST(Segments, ClosedWithoutCornerThrows) {
  EXPECT_THROW(segments_of(closed_from("SSSS")), ChainError);
}

TEST(Segments, FromSegments) {
  auto sq = chain_from_segments({Topology::Closed, {1, 1, 1, 1}});
  EXPECT_EQ(sq, closed_from("CCCC"));
  auto oct = chain_from_segments({Topology::Closed, {1, 2, 1, 1, 2, 1}});
  EXPECT_EQ(segments_of(oct), segments_of(closed_from("CCSCCCSC")));
  auto open3 = chain_from_segments({Topology::Open, {3}});
  EXPECT_EQ(open3.angles, (std::vector<Angle>{Angle::Straight, Angle::Straight}));
  EXPECT_THROW(chain_from_segments({Topology::Open, {2, 0, 1}}), ChainError);
  EXPECT_THROW(chain_from_segments({Topology::Closed, {}}), ChainError);
}

TEST(Segments, RoundTripAndSumProperty) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 2000; ++iter) {
    const auto t = iter % 2 ? Topology::Open : Topology::Closed;
    auto c = random_chain(rng, t, 2 + rng() % 40);
    if (t == Topology::Closed && c.corner_count() == 0) c.angles[0] = Angle::Corner;
    auto d = segments_of(c);
    EXPECT_EQ(static_cast<std::size_t>(d.total_length()), c.edge_count());
    auto back = chain_from_segments(d);
    if (t == Topology::Open) {
      EXPECT_EQ(back, c);
    } else {
      // equal up to rotation of the vertex labels
      bool match = false;
      for (std::size_t r = 0; r < c.angles.size() && !match; ++r) {
        std::vector<Angle> rot(c.angles.begin() + static_cast<long>(r), c.angles.end());
        rot.insert(rot.end(), c.angles.begin(), c.angles.begin() + static_cast<long>(r));
        match = rot == back.angles;
      }
      EXPECT_TRUE(match);
    }
  }
}

TEST(Validate, ParityAndCorners) {
  EXPECT_TRUE(validate(closed_from("CCCCC")).has("odd-parity"));
  EXPECT_TRUE(validate(closed_from("CCCC")).ok());
  EXPECT_TRUE(validate(closed_from("SSSS")).has("no-corner"));
  FixedAngleChain open8{Topology::Open, std::vector<Angle>(7, Angle::Corner), std::nullopt};
  EXPECT_TRUE(validate(open8).ok());
  open8.colors = std::vector<Color>(3, Color::H);
  EXPECT_TRUE(validate(open8).has("color-count"));
}

TEST(Validate, FlagsExactlyOddOrCornerless) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 1000; ++iter) {
    auto c = random_chain(rng, Topology::Closed, 1 + rng() % 12);
    const bool bad = c.angles.size() % 2 == 1 || c.corner_count() == 0;
    EXPECT_EQ(!validate(c).ok(), bad);
  }
}

TEST(Turns, ParseAndMirror) {
  auto t = parse_turns("LRLRL");
  EXPECT_EQ(to_string(t), "LRLRL");
  EXPECT_EQ(to_string(t.mirrored()), "RLRLR");
  EXPECT_THROW(parse_turns("LRX"), ChainError);
}
