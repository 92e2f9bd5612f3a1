#include <gtest/gtest.h>

#include <random>

#include "chainfold/fold_engine.hpp"

using namespace chainfold;

namespace {

FixedAngleChain closed_from(std::string_view angles) {
  FixedAngleChain c;
  c.topology = Topology::Closed;
  for (char ch : angles) c.angles.push_back(ch == 'C' ? Angle::Corner : Angle::Straight);
  return c;
}

FixedAngleChain random_chain(std::mt19937_64& rng, Topology t, std::size_t edges, double p_corner = 0.6) {
  FixedAngleChain c;
  c.topology = t;
  const std::size_t n = t == Topology::Open ? edges - 1 : edges;
  std::bernoulli_distribution corner(p_corner);
  for (std::size_t i = 0; i < n; ++i) c.angles.push_back(corner(rng) ? Angle::Corner : Angle::Straight);
  if (t == Topology::Closed && c.corner_count() == 0) c.angles[0] = Angle::Corner;
  return c;
}

TurnSequence random_turns(std::mt19937_64& rng, std::size_t k) {
  TurnSequence t;
  for (std::size_t i = 0; i < k; ++i) t.turns.push_back(rng() % 2 ? Turn::Left : Turn::Right);
  return t;
}

std::vector<Point> pts(std::initializer_list<std::pair<int, int>> xs) {
  std::vector<Point> out;
  for (auto [x, y] : xs) out.push_back({x, y});
  return out;
}

// Structural re-check: unit edges, straight/corner angles honoured.
bool structurally_valid(const FixedAngleChain& c, const LatticeConfiguration& cfg) {
  for (std::size_t i = 0; i + 1 < cfg.points.size(); ++i)
    if (l1_distance(cfg.points[i], cfg.points[i + 1]) != 1) return false;
  for (std::size_t v = 1; v + 1 < cfg.points.size(); ++v) {
    const auto in = *heading_of(cfg.points[v] - cfg.points[v - 1]);
    const auto out = *heading_of(cfg.points[v + 1] - cfg.points[v]);
    const auto a = c.angle_at(v);
    if (!a) continue;
    if (*a == Angle::Straight && in != out) return false;
    if (*a == Angle::Corner && !turn_between(in, out)) return false;
  }
  return true;
}

const FixedAngleChain kOctagon = closed_from("CCSCCCSC");

}  // namespace

TEST(Embed, UnitSquare) {
  auto cfg = embed(closed_from("CCCC"), parse_turns("LLLL"), {});
  EXPECT_EQ(cfg.points, pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}));
}

TEST(Embed, OpenExamples) {
  auto c = chain_from_segments({Topology::Open, {1, 2, 1}});
  EXPECT_EQ(embed(c, parse_turns("LL"), {}).points, pts({{0, 0}, {1, 0}, {1, 1}, {1, 2}, {0, 2}}));
  EXPECT_EQ(embed(c, parse_turns("LR"), {}).points, pts({{0, 0}, {1, 0}, {1, 1}, {1, 2}, {2, 2}}));
  EXPECT_THROW(embed(c, parse_turns("L"), {}), ChainError);
}

TEST(Noncrossing, Basics) {
  auto sq = embed(closed_from("CCCC"), parse_turns("LLLL"), {});
  EXPECT_TRUE(is_noncrossing(sq));
  EXPECT_TRUE(geometric_noncrossing_oracle(sq));
  LatticeConfiguration hook{Topology::Open, pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}})};
  EXPECT_TRUE(is_noncrossing(hook));
  EXPECT_TRUE(geometric_noncrossing_oracle(hook));
}

TEST(Noncrossing, OctagonClosesOnlyWithCrossings) {
  auto cfg = embed(kOctagon, parse_turns("LLRRRL"), {});
  EXPECT_TRUE(check_closure(kOctagon, cfg));
  EXPECT_TRUE(check_closure(kOctagon, cfg, parse_turns("LLRRRL")));
  EXPECT_FALSE(is_noncrossing(cfg));
  EXPECT_FALSE(geometric_noncrossing_oracle(cfg));
  EXPECT_EQ(cfg.points[2], cfg.points[6]);
}

TEST(Closure, Examples) {
  auto sq = closed_from("CCCC");
  EXPECT_TRUE(check_closure(sq, embed(sq, parse_turns("LLLL"), {})));
  EXPECT_FALSE(check_closure(sq, embed(sq, parse_turns("LLLR"), {})));
  // wrong v_0 entry is caught when the sequence is supplied
  EXPECT_FALSE(check_closure(sq, embed(sq, parse_turns("RLLL"), {}), parse_turns("RLLL")));
}

TEST(Closure, ImpliesEvenAndZeroDisplacement) {
  std::mt19937_64 rng(3);
  int closed_seen = 0;
  for (int iter = 0; iter < 20000; ++iter) {
    auto c = random_chain(rng, Topology::Closed, 3 + rng() % 10, 0.8);
    auto t = random_turns(rng, c.corner_count());
    auto cfg = embed(c, t, {});
    if (!check_closure(c, cfg, t)) continue;
    ++closed_seen;
    EXPECT_EQ(c.edge_count() % 2, 0u);
    std::int64_t dx = 0, dy = 0;
    for (std::size_t i = 0; i + 1 < cfg.points.size(); ++i) {
      dx += cfg.points[i + 1].x - cfg.points[i].x;
      dy += cfg.points[i + 1].y - cfg.points[i].y;
    }
    EXPECT_EQ(dx, 0);
    EXPECT_EQ(dy, 0);
  }
  EXPECT_GT(closed_seen, 50);
}

TEST(Zigzag, Examples) {
  FixedAngleChain five{Topology::Open, std::vector<Angle>(5, Angle::Corner), std::nullopt};
  EXPECT_EQ(to_string(zigzag_turns(five)), "LRLRL");
  EXPECT_EQ(to_string(zigzag_turns(chain_from_segments({Topology::Open, {1, 2, 1}}))), "LR");
  EXPECT_EQ(zigzag_turns(chain_from_segments({Topology::Open, {4}})).size(), 0u);
  EXPECT_THROW(zigzag_turns(closed_from("CCCC")), ChainError);
}

TEST(Zigzag, MonotoneAndNoncrossing) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 500; ++iter) {
    auto c = random_chain(rng, Topology::Open, 1 + rng() % 200);
    auto cfg = embed(c, zigzag_turns(c), {});
    ASSERT_TRUE(is_noncrossing(cfg));
    for (std::size_t i = 0; i + 1 < cfg.points.size(); ++i)
      ASSERT_LT(cfg.points[i].x + cfg.points[i].y, cfg.points[i + 1].x + cfg.points[i + 1].y);
  }
}

TEST(Embed, StructuralInvariants) {
  std::mt19937_64 rng(9);
  for (int iter = 0; iter < 2000; ++iter) {
    const auto topo = iter % 2 ? Topology::Open : Topology::Closed;
    auto c = random_chain(rng, topo, 2 + rng() % 30);
    auto cfg = embed(c, random_turns(rng, c.corner_count()), {});
    ASSERT_EQ(cfg.points.size(), c.edge_count() + 1);
    ASSERT_TRUE(structurally_valid(c, cfg));
  }
}

TEST(Embed, PoseEquivariance) {
  std::mt19937_64 rng(13);
  auto rotate = [](Point p, int quarter) {
    for (int i = 0; i < quarter; ++i) p = {-p.y, p.x};
    return p;
  };
  for (int iter = 0; iter < 500; ++iter) {
    auto c = random_chain(rng, Topology::Open, 2 + rng() % 30);
    auto t = random_turns(rng, c.corner_count());
    auto base = embed(c, t, {});
    const int q = static_cast<int>(rng() % 4);
    const Point shift{static_cast<std::int64_t>(rng() % 100) - 50, static_cast<std::int64_t>(rng() % 100) - 50};
    auto moved = embed(c, t, {shift, static_cast<Heading>(q)});
    for (std::size_t i = 0; i < base.points.size(); ++i) ASSERT_EQ(moved.points[i], rotate(base.points[i], q) + shift);
  }
}

TEST(Noncrossing, OracleEquivalenceRandom) {
  std::mt19937_64 rng(17);
  int crossing = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    const auto topo = iter % 3 == 0 ? Topology::Closed : Topology::Open;
    auto c = random_chain(rng, topo, 2 + rng() % 29);
    auto cfg = embed(c, random_turns(rng, c.corner_count()), {});
    const bool fast = is_noncrossing(cfg);
    ASSERT_EQ(fast, geometric_noncrossing_oracle(cfg));
    crossing += !fast;
  }
  EXPECT_GT(crossing, 100);
}

TEST(Contacts, Examples) {
  LatticeConfiguration u{Topology::Open, pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}})};
  std::vector<Color> hpph{Color::H, Color::P, Color::P, Color::H};
  EXPECT_EQ(count_hh_contacts(u, hpph), 1u);
  LatticeConfiguration stair{Topology::Open, pts({{0, 0}, {1, 0}, {1, 1}, {2, 1}})};
  EXPECT_EQ(count_hh_contacts(stair, hpph), 0u);
  LatticeConfiguration edge{Topology::Open, pts({{0, 0}, {1, 0}})};
  EXPECT_EQ(count_hh_contacts(edge, std::vector<Color>{Color::H, Color::H}), 0u);
  EXPECT_THROW(count_hh_contacts(u, std::nullopt), ChainError);
}

TEST(Box, Containment) {
  auto sq = embed(closed_from("CCCC"), parse_turns("LLLL"), {});
  EXPECT_TRUE(within_box(sq, {{0, 0}, {1, 1}}));
  EXPECT_FALSE(within_box(sq, {{0, 0}, {0, 1}}));
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    auto c = random_chain(rng, Topology::Open, 2 + rng() % 30);
    auto cfg = embed(c, random_turns(rng, c.corner_count()), {});
    EXPECT_TRUE(within_box(cfg, bounding_box(cfg.points)));
  }
}

TEST(Dump, Format) {
  auto sq = embed(closed_from("CCCC"), parse_turns("LLLL"), {});
  EXPECT_EQ(to_string(sq), "closed\n0 0\n1 0\n1 1\n0 1\n0 0\n");
}

// Segment-level tracing must agree with per-vertex embedding.
TEST(Polyline, TraceMatchesEmbed) {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 3000; ++iter) {
    const auto topo = iter % 2 ? Topology::Open : Topology::Closed;
    auto segs = SegmentDecomposition{topo, {}};
    const std::size_t k = 1 + rng() % 12;
    for (std::size_t i = 0; i < k; ++i) segs.lengths.push_back(1 + static_cast<std::int64_t>(rng() % 4));
    auto c = chain_from_segments(segs);
    auto t = random_turns(rng, c.corner_count());
    const Pose pose{{static_cast<std::int64_t>(rng() % 7), 3}, static_cast<Heading>(rng() % 4)};
    auto cfg = embed(c, t, pose);
    auto poly = trace(segs, t, pose);
    std::int64_t v = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      ASSERT_EQ(poly[i], cfg.points[static_cast<std::size_t>(v)]);
      if (i < segs.lengths.size()) v += segs.lengths[i];
    }
    ASSERT_EQ(polyline_noncrossing(poly, topo == Topology::Closed), is_noncrossing(cfg)) << to_string(t);
    if (topo == Topology::Closed) ASSERT_EQ(polyline_closes(poly, t), check_closure(c, cfg, t));
    for (std::int64_t w = 0; w <= segs.total_length(); ++w)
      ASSERT_EQ(vertex_on_polyline(poly, segs, w), cfg.points[static_cast<std::size_t>(w)]);
  }
}
