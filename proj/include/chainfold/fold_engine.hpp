#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chainfold/core_model.hpp"

namespace chainfold {

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
  Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
  Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
  Point operator*(std::int64_t k) const { return {x * k, y * k}; }
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    auto h = static_cast<std::uint64_t>(p.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(p.y) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

using PointSet = std::unordered_set<Point, PointHash>;

inline std::int64_t l1_distance(Point a, Point b) { return std::llabs(a.x - b.x) + std::llabs(a.y - b.y); }

/// Axis headings in counterclockwise order; Left turns add one step.
enum class Heading : std::uint8_t { PosX = 0, PosY = 1, NegX = 2, NegY = 3 };

inline Point unit(Heading h) {
  static constexpr std::array<Point, 4> kUnit{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  return kUnit[static_cast<std::size_t>(h)];
}
inline Heading turned(Heading h, Turn t) {
  const int step = t == Turn::Left ? 1 : 3;
  return static_cast<Heading>((static_cast<int>(h) + step) % 4);
}
inline Heading reversed(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 2) % 4); }
inline bool is_horizontal(Heading h) { return h == Heading::PosX || h == Heading::NegX; }

inline std::optional<Heading> heading_of(Point step) {
  if (step == Point{1, 0}) return Heading::PosX;
  if (step == Point{0, 1}) return Heading::PosY;
  if (step == Point{-1, 0}) return Heading::NegX;
  if (step == Point{0, -1}) return Heading::NegY;
  return std::nullopt;
}

/// Turn that takes heading `from` to the perpendicular heading `to`.
inline std::optional<Turn> turn_between(Heading from, Heading to) {
  if (turned(from, Turn::Left) == to) return Turn::Left;
  if (turned(from, Turn::Right) == to) return Turn::Right;
  return std::nullopt;
}

struct Pose {
  Point origin{};
  Heading heading = Heading::PosX;
};

struct Box {
  Point min{};
  Point max{};

  bool contains(Point p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  std::int64_t width() const { return max.x - min.x; }
  std::int64_t height() const { return max.y - min.y; }
};

/// One lattice point per vertex. Closed configurations also list the point
/// reached for v_n so closure can be checked.
struct LatticeConfiguration {
  Topology topology = Topology::Open;
  std::vector<Point> points;

  std::size_t vertex_count() const {
    return topology == Topology::Closed && !points.empty() ? points.size() - 1 : points.size();
  }
};

inline Box bounding_box(const std::vector<Point>& pts) {
  if (pts.empty()) return {};
  Box b{pts.front(), pts.front()};
  for (const auto& p : pts) {
    b.min.x = std::min(b.min.x, p.x);
    b.min.y = std::min(b.min.y, p.y);
    b.max.x = std::max(b.max.x, p.x);
    b.max.y = std::max(b.max.y, p.y);
  }
  return b;
}

/// Places v_0 at the pose origin, v_1 one step along the heading, and walks
/// the chain consuming one turn per corner.
inline LatticeConfiguration embed(const FixedAngleChain& chain, const TurnSequence& turns, const Pose& pose) {
  if (turns.size() != chain.corner_count())
    throw ChainError("turn count " + std::to_string(turns.size()) + " does not match corner count " +
                     std::to_string(chain.corner_count()));
  LatticeConfiguration cfg{chain.topology, {}};
  const std::size_t edges = chain.edge_count();
  cfg.points.reserve(edges + 1);
  Point p = pose.origin;
  Heading h = pose.heading;
  cfg.points.push_back(p);
  std::size_t next_turn = 0;
  std::size_t first_vertex = 1;
  if (chain.topology == Topology::Closed && chain.angles.at(0) == Angle::Corner) next_turn = 1;
  for (std::size_t e = 0; e < edges; ++e) {
    if (e > 0) {
      const std::size_t v = e;  // vertex between edge e-1 and edge e
      const Angle a = chain.topology == Topology::Closed ? chain.angles[v] : chain.angles[v - first_vertex];
      if (a == Angle::Corner) h = turned(h, turns.turns[next_turn++]);
    }
    p = p + unit(h);
    cfg.points.push_back(p);
  }
  return cfg;
}

/// Injective vertex placement (v_n identified with v_0 for closed chains).
/// Unit axis-aligned lattice edges can only meet at lattice points, and every
/// lattice point on an edge is one of its endpoints, so a point shared by two
/// edges that is not a common vertex is exactly a repeated vertex placement.
inline bool is_noncrossing(const LatticeConfiguration& cfg) {
  PointSet seen;
  seen.reserve(cfg.points.size() * 2);
  const std::size_t n = cfg.vertex_count();
  for (std::size_t i = 0; i < n; ++i)
    if (!seen.insert(cfg.points[i]).second) return false;
  if (cfg.topology == Topology::Closed && cfg.points.size() == n + 1) {
    const Point last = cfg.points.back();
    if (last != cfg.points.front() && seen.count(last)) return false;
  }
  return true;
}

/// Brute-force reference: every pair of edges may intersect only in a point
/// that is a common graph vertex of both.
inline bool geometric_noncrossing_oracle(const LatticeConfiguration& cfg) {
  const std::size_t n = cfg.vertex_count();
  struct Edge {
    std::size_t u, v;
    Point a, b;
  };
  std::vector<Edge> edges;
  const std::size_t m = cfg.points.size() - 1;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t u = i, v = i + 1;
    if (cfg.topology == Topology::Closed && v == n) v = 0;
    edges.push_back({u, v, cfg.points[i], cfg.points[i + 1]});
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Edge& e = edges[i];
      const Edge& f = edges[j];
      const std::int64_t lox = std::max(std::min(e.a.x, e.b.x), std::min(f.a.x, f.b.x));
      const std::int64_t hix = std::min(std::max(e.a.x, e.b.x), std::max(f.a.x, f.b.x));
      const std::int64_t loy = std::max(std::min(e.a.y, e.b.y), std::min(f.a.y, f.b.y));
      const std::int64_t hiy = std::min(std::max(e.a.y, e.b.y), std::max(f.a.y, f.b.y));
      if (lox > hix || loy > hiy) continue;
      if (lox != hix || loy != hiy) return false;  // overlap of positive length
      const Point meet{lox, loy};
      std::optional<std::size_t> shared;
      for (auto x : {e.u, e.v})
        if (x == f.u || x == f.v) shared = x;
      if (!shared) return false;
      const Point at = cfg.points[*shared];
      if (meet != at) return false;
    }
  }
  return true;
}

/// Turn realised at v_0 by the closing edge of a closed configuration, if
/// the closing and opening edges are perpendicular.
inline std::optional<Turn> closing_turn(const LatticeConfiguration& cfg) {
  if (cfg.points.size() < 3) return std::nullopt;
  const auto in = heading_of(cfg.points.back() - cfg.points[cfg.points.size() - 2]);
  const auto out = heading_of(cfg.points[1] - cfg.points[0]);
  if (!in || !out) return std::nullopt;
  return turn_between(*in, *out);
}

/// Last point equals first and the angle at v_0 is realised by the closing
/// and opening edges. The angle at v_{n-1} is enforced by embed itself.
inline bool check_closure(const FixedAngleChain& chain, const LatticeConfiguration& cfg) {
  if (chain.topology != Topology::Closed) return false;
  if (cfg.points.size() != chain.edge_count() + 1 || cfg.points.size() < 3) return false;
  if (cfg.points.back() != cfg.points.front()) return false;
  const auto in = heading_of(cfg.points.back() - cfg.points[cfg.points.size() - 2]);
  const auto out = heading_of(cfg.points[1] - cfg.points[0]);
  if (!in || !out) return false;
  if (chain.angles[0] == Angle::Straight) return *in == *out;
  return turn_between(*in, *out).has_value();
}

/// As check_closure, and additionally the v_0 entry of the turn sequence
/// agrees with the realised closing turn.
inline bool check_closure(const FixedAngleChain& chain, const LatticeConfiguration& cfg, const TurnSequence& turns) {
  if (!check_closure(chain, cfg)) return false;
  if (chain.angles[0] == Angle::Straight) return true;
  const auto t = closing_turn(cfg);
  return t && !turns.turns.empty() && turns.turns.front() == *t;
}

/// Alternating L/R, one per corner. Embeds monotonically in x+y for every
/// open chain.
inline TurnSequence zigzag_turns(const FixedAngleChain& chain) {
  if (chain.topology != Topology::Open) throw ChainError("zig-zag construction needs an open chain");
  TurnSequence t;
  const std::size_t k = chain.corner_count();
  t.turns.reserve(k);
  for (std::size_t i = 0; i < k; ++i) t.turns.push_back(i % 2 == 0 ? Turn::Left : Turn::Right);
  return t;
}

/// Unordered H-H pairs at unit distance that are not chain edges.
inline std::size_t count_hh_contacts(const LatticeConfiguration& cfg, const std::optional<std::vector<Color>>& colors) {
  if (!colors) throw ChainError("H-H contacts need a color per vertex");
  const std::size_t n = cfg.vertex_count();
  if (colors->size() != n) throw ChainError("color list length does not match vertex count");
  std::unordered_map<Point, std::size_t, PointHash> where;
  for (std::size_t i = 0; i < n; ++i)
    if ((*colors)[i] == Color::H) where.emplace(cfg.points[i], i);
  const bool closed = cfg.topology == Topology::Closed;
  std::size_t count = 0;
  for (const auto& [p, i] : where) {
    for (Heading h : {Heading::PosX, Heading::PosY, Heading::NegX, Heading::NegY}) {
      auto it = where.find(p + unit(h));
      if (it == where.end()) continue;
      const std::size_t j = it->second;
      if (j <= i) continue;
      const bool edge = (j - i == 1) || (closed && i == 0 && j == n - 1);
      if (!edge) ++count;
    }
  }
  return count;
}

inline bool within_box(const LatticeConfiguration& cfg, const Box& box) {
  return std::all_of(cfg.points.begin(), cfg.points.end(), [&](const Point& p) { return box.contains(p); });
}

/// Dump format: header line `open|closed`, then one `x y` pair per line.
inline std::string to_string(const LatticeConfiguration& cfg) {
  std::string s(topology_name(cfg.topology));
  s.push_back('\n');
  for (const auto& p : cfg.points) s += std::to_string(p.x) + " " + std::to_string(p.y) + "\n";
  return s;
}

// ---- segment-level geometry -------------------------------------------------
//
// Reduction artifacts reach tens of millions of edges, so their checks work on
// corner points only. Each function below is equivalent to its per-vertex
// counterpart above.

/// Corner polyline of a chain given in raw segment order. Open: one point per
/// segment boundary (k+1 points). Closed: v_0 first; turns[0] is the v_0 turn,
/// turns[i] the turn at the start of segment i.
inline std::vector<Point> trace(const SegmentDecomposition& segs, const TurnSequence& turns, const Pose& pose) {
  const std::size_t k = segs.lengths.size();
  const std::size_t expect = segs.topology == Topology::Open ? (k == 0 ? 0 : k - 1) : k;
  if (turns.size() != expect) throw ChainError("turn count does not match segment count");
  std::vector<Point> out;
  out.reserve(k + 1);
  Point p = pose.origin;
  Heading h = pose.heading;
  out.push_back(p);
  const std::size_t offset = segs.topology == Topology::Open ? 1 : 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (i > 0) h = turned(h, turns.turns[i - offset]);
    p = p + unit(h) * segs.lengths[i];
    out.push_back(p);
  }
  return out;
}

/// Sweep-line noncrossing test over a corner polyline. `closed` identifies
/// the last point with the first when they coincide.
inline bool polyline_noncrossing(const std::vector<Point>& c, bool closed) {
  const std::size_t k = c.size() < 2 ? 0 : c.size() - 1;
  if (k == 0) return true;
  const bool wraps = closed && c.back() == c.front() && k > 1;
  auto adjacent = [&](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    if (j - i == 1) return true;
    return wraps && i == 0 && j == k - 1;
  };
  auto shared_point = [&](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    if (j - i == 1) return c[j];
    return c[0];
  };
  struct Seg {
    std::int64_t fixed, lo, hi;
    std::size_t idx;
  };
  std::vector<Seg> hs, vs;
  for (std::size_t i = 0; i < k; ++i) {
    const Point a = c[i], b = c[i + 1];
    if (a.y == b.y && a.x != b.x) hs.push_back({a.y, std::min(a.x, b.x), std::max(a.x, b.x), i});
    else if (a.x == b.x && a.y != b.y) vs.push_back({a.x, std::min(a.y, b.y), std::max(a.y, b.y), i});
    else return false;
  }
  auto collinear_ok = [&](std::vector<Seg>& v, bool horizontal) {
    std::sort(v.begin(), v.end(), [](const Seg& a, const Seg& b) {
      return a.fixed != b.fixed ? a.fixed < b.fixed : a.lo < b.lo;
    });
    for (std::size_t i = 1, best = 0; i < v.size(); ++i) {
      if (v[i].fixed != v[best].fixed) {
        best = i;
        continue;
      }
      if (v[i].lo <= v[best].hi) {
        if (v[i].lo < v[best].hi || !adjacent(v[i].idx, v[best].idx)) return false;
        const Point meet = horizontal ? Point{v[i].lo, v[i].fixed} : Point{v[i].fixed, v[i].lo};
        if (meet != shared_point(v[i].idx, v[best].idx)) return false;
      }
      if (v[i].hi >= v[best].hi) best = i;
    }
    return true;
  };
  if (!collinear_ok(hs, true) || !collinear_ok(vs, false)) return false;

  // Horizontal segments active over [lo, hi] in x; verticals query by y range.
  std::vector<std::size_t> by_lo(hs.size()), by_hi(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) by_lo[i] = by_hi[i] = i;
  std::sort(by_lo.begin(), by_lo.end(), [&](auto a, auto b) { return hs[a].lo < hs[b].lo; });
  std::sort(by_hi.begin(), by_hi.end(), [&](auto a, auto b) { return hs[a].hi < hs[b].hi; });
  std::sort(vs.begin(), vs.end(), [](const Seg& a, const Seg& b) { return a.fixed < b.fixed; });
  std::multimap<std::int64_t, std::size_t> active;  // y -> index into hs
  std::vector<std::multimap<std::int64_t, std::size_t>::iterator> handle(hs.size());
  std::size_t ins = 0, rem = 0;
  for (const auto& v : vs) {
    while (ins < by_lo.size() && hs[by_lo[ins]].lo <= v.fixed) {
      handle[by_lo[ins]] = active.emplace(hs[by_lo[ins]].fixed, by_lo[ins]);
      ++ins;
    }
    while (rem < by_hi.size() && hs[by_hi[rem]].hi < v.fixed) {
      active.erase(handle[by_hi[rem]]);
      ++rem;
    }
    for (auto it = active.lower_bound(v.lo); it != active.end() && it->first <= v.hi; ++it) {
      const Seg& h = hs[it->second];
      if (!adjacent(h.idx, v.idx)) return false;
      if (Point{v.fixed, h.fixed} != shared_point(h.idx, v.idx)) return false;
    }
  }
  return true;
}

/// Closure of a traced closed polyline including the v_0 turn entry.
inline bool polyline_closes(const std::vector<Point>& c, const TurnSequence& turns) {
  if (c.size() < 3 || c.back() != c.front() || turns.turns.empty()) return false;
  auto dir = [](Point a, Point b) {
    Point d{(b.x > a.x) - (b.x < a.x), (b.y > a.y) - (b.y < a.y)};
    return heading_of(d);
  };
  const auto in = dir(c[c.size() - 2], c.back());
  const auto out = dir(c[0], c[1]);
  if (!in || !out) return false;
  const auto t = turn_between(*in, *out);
  return t && *t == turns.turns.front();
}

/// Position of vertex `v` on a traced polyline (raw segment order).
inline Point vertex_on_polyline(const std::vector<Point>& c, const SegmentDecomposition& segs, std::int64_t v) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < segs.lengths.size(); ++i) {
    if (v <= acc + segs.lengths[i]) {
      const Point a = c[i], b = c[i + 1];
      Point d{(b.x > a.x) - (b.x < a.x), (b.y > a.y) - (b.y < a.y)};
      return a + d * (v - acc);
    }
    acc += segs.lengths[i];
  }
  throw ChainError("vertex index out of range");
}

}  // namespace chainfold
