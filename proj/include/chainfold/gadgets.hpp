#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "chainfold/core_model.hpp"
#include "chainfold/fold_engine.hpp"

namespace chainfold {

// ---- corner paths -----------------------------------------------------------

/// Axis-parallel polyline built move by move. Consecutive moves in the same
/// direction merge into one segment; a move straight back is rejected.
class PathBuilder {
 public:
  explicit PathBuilder(Point start) : pts_{start} {}

  PathBuilder& to(Point p) {
    const Point last = pts_.back();
    if (p == last) return *this;
    if (p.x != last.x && p.y != last.y) throw ChainError("path move is not axis-parallel");
    if (pts_.size() >= 2) {
      const Point prev = pts_[pts_.size() - 2];
      const auto d0 = heading_of({sign(last.x - prev.x), sign(last.y - prev.y)});
      const auto d1 = heading_of({sign(p.x - last.x), sign(p.y - last.y)});
      if (*d0 == *d1) {
        pts_.back() = p;
        return *this;
      }
      if (*d1 == reversed(*d0)) throw ChainError("path doubles back on itself");
    }
    pts_.push_back(p);
    return *this;
  }
  PathBuilder& move(Heading h, std::int64_t len) { return to(pts_.back() + unit(h) * len); }
  PathBuilder& dx(std::int64_t d) { return to({pts_.back().x + d, pts_.back().y}); }
  PathBuilder& dy(std::int64_t d) { return to({pts_.back().x, pts_.back().y + d}); }
  PathBuilder& append(const std::vector<Point>& more) {
    if (more.empty()) return *this;
    if (more.front() != pts_.back()) throw ChainError("appended path does not start at the current end");
    for (std::size_t i = 1; i < more.size(); ++i) to(more[i]);
    return *this;
  }

  Point end() const { return pts_.back(); }
  const std::vector<Point>& points() const { return pts_; }
  std::vector<Point> take() { return std::move(pts_); }

 private:
  static std::int64_t sign(std::int64_t v) { return (v > 0) - (v < 0); }
  std::vector<Point> pts_;
};

inline std::vector<Point> mirrored_y(std::vector<Point> pts) {
  for (auto& p : pts) p.y = -p.y;
  return pts;
}

inline std::vector<Point> translated(std::vector<Point> pts, Point d) {
  for (auto& p : pts) p = p + d;
  return pts;
}

inline std::vector<Point> reversed_path(std::vector<Point> pts) {
  std::reverse(pts.begin(), pts.end());
  return pts;
}

/// Segment lengths, turns and starting pose of an open corner path.
struct PathEncoding {
  SegmentDecomposition segments;
  TurnSequence turns;
  Pose pose;
};

inline PathEncoding encode_path(const std::vector<Point>& c) {
  if (c.size() < 2) throw ChainError("path needs at least one segment");
  PathEncoding e;
  e.segments.topology = Topology::Open;
  std::optional<Heading> prev;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const Point d = c[i + 1] - c[i];
    const std::int64_t len = std::llabs(d.x) + std::llabs(d.y);
    const auto h = heading_of({(d.x > 0) - (d.x < 0), (d.y > 0) - (d.y < 0)});
    if (!h || (d.x != 0 && d.y != 0) || len == 0) throw ChainError("path step is not a nonzero axis move");
    if (prev) {
      const auto t = turn_between(*prev, *h);
      if (!t) throw ChainError("path has a straight or reversing corner");
      e.turns.turns.push_back(*t);
    } else {
      e.pose = {c[0], *h};
    }
    e.segments.lengths.push_back(len);
    prev = h;
  }
  return e;
}

inline bool point_on_polyline(const std::vector<Point>& c, Point p) {
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const Point a = c[i], b = c[i + 1];
    if (a.x == b.x && p.x == a.x && p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y)) return true;
    if (a.y == b.y && p.y == a.y && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x)) return true;
  }
  return c.size() == 1 && c[0] == p;
}

// ---- fragments --------------------------------------------------------------

struct IntendedFolding {
  std::string name;
  TurnSequence turns;
  Pose pose;
  std::map<std::string, Point> anchors;
};

/// A gadget as a chain piece together with the foldings it is meant to take.
struct GadgetFragment {
  std::string kind;
  std::map<std::string, std::int64_t> params;
  SegmentDecomposition segments;
  std::vector<IntendedFolding> intended;

  FixedAngleChain chain() const { return chain_from_segments(segments); }

  std::vector<Point> corners(std::size_t i) const {
    return trace(segments, intended.at(i).turns, intended.at(i).pose);
  }

  const IntendedFolding& folding(const std::string& name) const {
    for (const auto& f : intended)
      if (f.name == name) return f;
    throw ChainError("fragment " + kind + " has no folding named " + name);
  }

  /// Adds an intended folding given by its corner path.
  void add(std::string name, const std::vector<Point>& path, std::map<std::string, Point> anchors = {}) {
    auto e = encode_path(path);
    if (intended.empty()) {
      segments = e.segments;
    } else if (segments.lengths != e.segments.lengths) {
      throw ChainError("folding " + name + " of " + kind + " changes the segment lengths");
    }
    intended.push_back({std::move(name), std::move(e.turns), e.pose, std::move(anchors)});
  }

  /// Uniform scaling of all lengths, poses and anchors.
  GadgetFragment scaled(std::int64_t k) const {
    GadgetFragment out = *this;
    for (auto& l : out.segments.lengths) l *= k;
    for (auto& f : out.intended) {
      f.pose.origin = f.pose.origin * k;
      for (auto& [n, p] : f.anchors) p = p * k;
    }
    return out;
  }
};

/// Every intended folding embeds noncrossing and carries its anchors.
inline bool fragment_consistent(const GadgetFragment& g) {
  const bool closed = g.segments.topology == Topology::Closed;
  for (std::size_t i = 0; i < g.intended.size(); ++i) {
    auto c = g.corners(i);
    if (!polyline_noncrossing(c, closed)) return false;
    if (closed && !polyline_closes(c, g.intended[i].turns)) return false;
    for (const auto& [n, p] : g.intended[i].anchors)
      if (!point_on_polyline(c, p)) return false;
  }
  return true;
}

// ---- insulation -------------------------------------------------------------

/// Insulation row on the doubled grid: unit column c covers doubled x 2c..2c+2.
/// Tabs sit at unit columns; grilles fill everything between them.
struct InsulationSpec {
  std::int64_t h = 1;                 ///< half-height in units
  std::int64_t width = 0;             ///< unit columns spanned
  std::vector<std::int64_t> tabs;     ///< unit columns of tabs, increasing
};

inline void check_insulation(const InsulationSpec& s) {
  if (s.h < 1) throw ChainError("insulation half-height must be at least 1");
  for (std::size_t i = 0; i < s.tabs.size(); ++i) {
    if (s.tabs[i] < 2 || s.tabs[i] > s.width - 3) throw ChainError("insulation tab at an extreme of the row");
    if (i > 0 && s.tabs[i] < s.tabs[i - 1] + 3) throw ChainError("insulation tabs are consecutive");
  }
  if (s.tabs.empty() && s.width < 2) throw ChainError("insulation row too narrow for a grille");
}

/// Repetition count k of each grille, left to right.
inline std::vector<std::int64_t> grille_sizes(const InsulationSpec& s) {
  std::vector<std::int64_t> k;
  std::int64_t left = 0;
  for (auto t : s.tabs) {
    k.push_back(t - left - 2 - (left > 0 ? 1 : 0));
    left = t;
  }
  k.push_back(s.width - left - (s.tabs.empty() ? 2 : 3));
  return k;
}

/// Grille segment lengths on the doubled grid: 2h, 1, 4h, (1, 4h)^2k, 1, 2h.
inline std::vector<std::int64_t> grille_segments(std::int64_t h, std::int64_t k) {
  std::vector<std::int64_t> s{2 * h, 1, 4 * h};
  for (std::int64_t i = 0; i < 2 * k; ++i) {
    s.push_back(1);
    s.push_back(4 * h);
  }
  s.push_back(1);
  s.push_back(2 * h);
  return s;
}

/// Corner path of one insulation folding, axis at y = 0 from x = 0 to 2*width.
/// grille_up[i]: grille i starts upward; tab_up[j]: tab j points up.
inline std::vector<Point> insulation_path(const InsulationSpec& s, const std::vector<bool>& grille_up,
                                          const std::vector<bool>& tab_up) {
  const auto ks = grille_sizes(s);
  const std::int64_t H = 2 * s.h;
  PathBuilder p({0, 0});
  auto grille = [&](std::int64_t k, bool up) {
    std::int64_t dir = up ? 1 : -1;
    p.dy(dir * H);
    for (std::int64_t i = 0; i < 2 * k + 1; ++i) {
      p.dx(1);
      dir = -dir;
      p.dy(dir * 2 * H);
    }
    p.dx(1);
    p.dy(-dir * H);
  };
  for (std::size_t g = 0; g < ks.size(); ++g) {
    p.dx(1);
    grille(ks[g], grille_up.at(g));
    p.dx(1);
    if (g < s.tabs.size()) {
      const std::int64_t dir = tab_up.at(g) ? 1 : -1;
      p.dy(dir * (H + 4));
      p.dx(2);
      p.dy(-dir * (H + 4));
    }
  }
  return p.take();
}

inline GadgetFragment build_insulation(const InsulationSpec& s) {
  check_insulation(s);
  const auto ks = grille_sizes(s);
  const std::size_t g = ks.size(), t = s.tabs.size();
  const std::int64_t H = 2 * s.h;
  GadgetFragment f;
  f.kind = "insulation";
  f.params = {{"h", s.h}, {"width", s.width}, {"grilles", static_cast<std::int64_t>(g)},
              {"tabs", static_cast<std::int64_t>(t)}};
  // enumerate every reflection choice when small, otherwise the two uniform ones
  const std::size_t bits = g + t;
  std::vector<std::uint64_t> masks;
  if (bits <= 10) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << bits); ++m) masks.push_back(m);
  } else {
    masks = {0, (std::uint64_t{1} << std::min<std::size_t>(bits, 63)) - 1};
  }
  for (auto m : masks) {
    std::vector<bool> gu(g), tu(t);
    std::string name;
    for (std::size_t i = 0; i < g; ++i) {
      gu[i] = (m >> i) & 1;
      name += gu[i] ? 'U' : 'D';
    }
    name += '/';
    for (std::size_t j = 0; j < t; ++j) {
      tu[j] = (m >> (g + j)) & 1;
      name += tu[j] ? 'U' : 'D';
    }
    std::map<std::string, Point> anchors{{"left", {0, 0}}, {"right", {2 * s.width, 0}}};
    for (std::size_t j = 0; j < t; ++j) {
      const std::int64_t x = 2 * s.tabs[j];
      anchors["tab" + std::to_string(j)] = {x, tu[j] ? H + 4 : -(H + 4)};
    }
    f.add(std::move(name), insulation_path(s, gu, tu), std::move(anchors));
  }
  return f;
}

/// Doubled-grid rectangles fully enclosed by each grille (x range, y range).
inline std::vector<Box> grille_blocked_boxes(const InsulationSpec& s) {
  const auto ks = grille_sizes(s);
  std::vector<Box> out;
  const std::int64_t H = 2 * s.h;
  for (std::size_t g = 0; g < ks.size(); ++g) {
    const std::int64_t g0 = g == 0 ? 1 : 2 * s.tabs[g - 1] + 3;
    out.push_back({{g0 + 1, -H}, {g0 + 2 * ks[g] + 1, H}});
  }
  return out;
}

// ---- choice gadget ----------------------------------------------------------

/// Lengths of one side of the choice gadget, from the pinned endpoint to the tab.
inline constexpr std::array<std::int64_t, 9> kChoiceSide{1, 1, 1, 2, 1, 2, 1, 1, 4};

inline std::vector<std::int64_t> choice_segments() {
  std::vector<std::int64_t> s(kChoiceSide.begin(), kChoiceSide.end());
  s.push_back(1);
  s.insert(s.end(), kChoiceSide.rbegin(), kChoiceSide.rend());
  return s;
}

/// The five downward embeddings, by tab column; turn strings exclude the
/// turn onto the first segment.
struct ChoiceEmbedding {
  std::int64_t tab_x;
  const char* turns;
};
inline constexpr std::array<ChoiceEmbedding, 5> kChoiceDown{{
    {4, "RLLRLRLRLLRLLRLRLR"},
    {0, "RLLRRLLRLLRLRLLRLR"},
    {0, "RLRLLRLRLLRLLRRLLR"},
    {0, "RLRLLRLRLLRLRLLRLR"},
    {-4, "RLRLRLLRLLRLRLRLLR"},
}};

/// Choice gadget between pinned endpoints (0,0) and (1,0); the tab bottom
/// sits at depth 8 on the chosen side. Folding names: "down<x>#i" / "up<x>#i".
inline GadgetFragment build_choice() {
  GadgetFragment f;
  f.kind = "choice";
  SegmentDecomposition segs{Topology::Open, choice_segments()};
  f.segments = segs;
  for (int side = 0; side < 2; ++side) {
    for (std::size_t i = 0; i < kChoiceDown.size(); ++i) {
      const auto& e = kChoiceDown[i];
      auto turns = parse_turns(e.turns);
      Pose pose{{0, 0}, Heading::NegY};
      if (side == 1) {
        turns = turns.mirrored();
        pose.heading = Heading::PosY;
      }
      const std::int64_t ty = side == 0 ? -8 : 8;
      std::string name = std::string(side == 0 ? "down" : "up") + std::to_string(e.tab_x) + "#" + std::to_string(i);
      f.intended.push_back({name, turns, pose,
                            {{"left", {0, 0}}, {"right", {1, 0}}, {"tab", {e.tab_x, ty}}, {"tab2", {e.tab_x + 1, ty}}}});
    }
  }
  return f;
}

/// Index into kChoiceDown used for a tab at the given column.
inline std::size_t choice_embedding_for(std::int64_t tab_x) {
  for (std::size_t i = 0; i < kChoiceDown.size(); ++i)
    if (kChoiceDown[i].tab_x == tab_x) return i;
  throw ChainError("choice tab column must be -4, 0 or 4");
}

/// Corner path of the choice gadget with its tab at (tab_x, below ? -8 : 8).
inline std::vector<Point> choice_path(std::int64_t tab_x, bool below) {
  const auto& e = kChoiceDown[choice_embedding_for(tab_x)];
  auto turns = parse_turns(e.turns);
  Pose pose{{0, 0}, Heading::NegY};
  if (!below) {
    turns = turns.mirrored();
    pose.heading = Heading::PosY;
  }
  return trace({Topology::Open, choice_segments()}, turns, pose);
}

// ---- hooks ------------------------------------------------------------------

enum class HookRole : std::uint8_t { Stabilizing, Tab };

inline std::int64_t l_min_for(std::size_t clause_count) {
  return std::max<std::int64_t>(50, 16 * static_cast<std::int64_t>(clause_count) + 21);
}

/// Doubled vertical-horizontal-vertical path. Lengths in order:
/// first, horizontal, middle, 1, middle+1, horizontal, last (= first-1).
struct HookSpec {
  bool up = false;
  std::int64_t first = 0, middle = 0, last = 0;
  std::int64_t horizontal = 0;
  HookRole role = HookRole::Stabilizing;
  std::int64_t l_min = 50;
  std::int64_t margin = 50;              ///< required excess of first/last over the middle ones
  std::int64_t construction_width = 0;   ///< horizontal must exceed half of this
};

inline void check_hook(const HookSpec& s) {
  if (s.last != s.first - 1) throw ChainError("hook: last vertical must be one shorter than the first");
  if (s.first < s.l_min || s.middle < s.l_min || s.last < s.l_min)
    throw ChainError("hook: vertical length below l_min = " + std::to_string(s.l_min));
  if (s.last < s.middle + 1 + s.margin)
    throw ChainError("hook: first and last verticals must exceed the middle ones by " + std::to_string(s.margin));
  if (s.horizontal < 1 || 2 * s.horizontal <= s.construction_width)
    throw ChainError("hook: horizontal length must exceed half the construction width");
}

/// Hook path from start, ending one column to the right of the start.
inline std::vector<Point> hook_path(const HookSpec& s, Point start) {
  const std::int64_t d = s.up ? 1 : -1;
  PathBuilder p(start);
  p.dy(d * s.first).dx(s.horizontal).dy(d * s.middle).dx(1).dy(-d * (s.middle + 1)).dx(-s.horizontal).dy(-d * s.last);
  return p.take();
}

inline Point hook_tip(const HookSpec& s, Point start) {
  const std::int64_t d = s.up ? 1 : -1;
  return {start.x + s.horizontal, start.y + d * (s.first + s.middle)};
}

/// Tab hooks fold retracted or shifted 2 outward (extended); stabilizing hooks
/// have the single intended folding.
inline GadgetFragment build_hook(const HookSpec& s) {
  check_hook(s);
  GadgetFragment f;
  f.kind = "hook";
  f.params = {{"first", s.first}, {"middle", s.middle}, {"horizontal", s.horizontal}, {"up", s.up},
              {"tab", s.role == HookRole::Tab}};
  auto add = [&](std::string name, Point start) {
    const Point tip = hook_tip(s, start);
    f.add(std::move(name), hook_path(s, start),
          {{"start", start}, {"end", start + Point{1, 0}}, {"tip", tip}, {"tip2", tip + Point{1, 0}}});
  };
  add(s.role == HookRole::Tab ? "retracted" : "fixed", {0, 0});
  if (s.role == HookRole::Tab) add("extended", {0, s.up ? 2 : -2});
  return f;
}

// ---- variable gadget --------------------------------------------------------

struct VariableOccurrence {
  bool positive = true;
  bool above = true;
  bool null = false;
};

/// Upper and lower zig-zag heights of an occurrence in the true folding.
inline std::pair<std::int64_t, std::int64_t> occurrence_heights(const VariableOccurrence& o) {
  if (o.null) return {3, -1};
  return (o.positive == o.above) ? std::pair<std::int64_t, std::int64_t>{1, -3}
                                 : std::pair<std::int64_t, std::int64_t>{3, -1};
}

inline std::int64_t variable_width(std::size_t k) { return 18 + 3 * static_cast<std::int64_t>(k); }

/// True-folding corner path, left endpoint at the origin.
inline std::vector<Point> variable_path(const std::vector<VariableOccurrence>& occ) {
  const auto k = static_cast<std::int64_t>(occ.size());
  PathBuilder p({0, 0});
  p.to({2, 0}).to({2, 3}).to({4, 3}).to({4, -3}).to({6, -3}).to({6, 1}).to({9, 1});
  for (std::int64_t i = 0; i < k; ++i) {
    p.to({9 + 3 * i, occurrence_heights(occ[static_cast<std::size_t>(i)]).first});
    p.to({12 + 3 * i, p.end().y});
  }
  p.to({9 + 3 * k, 3}).to({11 + 3 * k, 3}).to({11 + 3 * k, 0}).to({7, 0}).to({7, -3}).to({9, -3});
  for (std::int64_t i = 0; i < k; ++i) {
    p.to({9 + 3 * i, occurrence_heights(occ[static_cast<std::size_t>(i)]).second});
    p.to({12 + 3 * i, p.end().y});
  }
  p.to({9 + 3 * k, -1}).to({12 + 3 * k, -1}).to({12 + 3 * k, 3}).to({14 + 3 * k, 3});
  p.to({14 + 3 * k, -3}).to({16 + 3 * k, -3}).to({16 + 3 * k, 0}).to({18 + 3 * k, 0});
  return p.take();
}

/// Variable gadget; folding "true" as built, "false" its reflection through
/// the baseline. Anchors: tab columns of each occurrence on both zig-zags.
inline GadgetFragment build_variable(const std::vector<VariableOccurrence>& occ) {
  if (occ.empty()) throw ChainError("variable gadget needs at least one occurrence");
  GadgetFragment f;
  f.kind = "variable";
  const auto k = static_cast<std::int64_t>(occ.size());
  f.params = {{"k", k}, {"width", variable_width(occ.size())}};
  auto path = variable_path(occ);
  for (int side = 0; side < 2; ++side) {
    std::map<std::string, Point> anchors{{"left", {0, 0}}, {"right", {variable_width(occ.size()), 0}}};
    for (std::int64_t i = 0; i < k; ++i) {
      auto [u, l] = occurrence_heights(occ[static_cast<std::size_t>(i)]);
      if (side == 1) std::tie(u, l) = std::pair{-l, -u};
      anchors["upper" + std::to_string(i)] = {10 + 3 * i, u};
      anchors["lower" + std::to_string(i)] = {10 + 3 * i, l};
    }
    f.add(side == 0 ? "true" : "false", side == 0 ? path : mirrored_y(path), std::move(anchors));
  }
  return f;
}

// ---- clause gadget ----------------------------------------------------------

struct ClauseConnection {
  bool above = false;
  std::int64_t shift = 0;  ///< choice tab column: -4, 0 or 4
};

/// Hooks of one sheath, ordered by start column: left stabilizing hook, tab
/// hooks by increasing shift, right stabilizing hook.
struct ClauseSpec {
  std::vector<ClauseConnection> connections;
  std::vector<HookSpec> top_hooks, bottom_hooks;
};

struct ClauseFragments {
  GadgetFragment choice, top, bottom;
};

inline void check_clause(const ClauseSpec& c) {
  if (c.connections.size() != 3) throw ChainError("clause needs exactly three connections");
  std::set<std::int64_t> shifts;
  for (const auto& k : c.connections) {
    if (k.shift != -4 && k.shift != 0 && k.shift != 4) throw ChainError("clause shift must be -4, 0 or 4");
    if (!shifts.insert(k.shift).second) throw ChainError("clause connections share a choice shift");
  }
}

/// Tab columns on one side, increasing.
inline std::vector<std::int64_t> clause_side_shifts(const ClauseSpec& c, bool above) {
  std::vector<std::int64_t> out;
  for (const auto& k : c.connections)
    if (k.above == above) out.push_back(k.shift);
  std::sort(out.begin(), out.end());
  return out;
}

/// Start columns of a sheath's hooks in hook order.
inline std::vector<std::int64_t> sheath_hook_starts(const std::vector<std::int64_t>& shifts) {
  std::vector<std::int64_t> x{-8};
  x.insert(x.end(), shifts.begin(), shifts.end());
  x.push_back(8);
  return x;
}

/// Nested hook lengths for a sheath whose hooks start at starts[j] and end
/// with tips at tips[j] (both increasing). Earlier hooks run deeper; all
/// stabilizing and extended tab tips sit reach() below the sheath line.
struct HookStack {
  std::int64_t l_min = 50, margin = 50, construction_width = 0;

  std::int64_t d_min(std::size_t n) const { return 5 * (static_cast<std::int64_t>(n) - 1) + l_min + margin + 8; }
  std::int64_t depth(std::size_t n, std::size_t j) const {
    return d_min(n) + 5 * (static_cast<std::int64_t>(n) - 1 - static_cast<std::int64_t>(j));
  }
  std::int64_t reach(std::size_t n) const { return depth(n, 0) + l_min + 2; }

  /// Roles default to stabilizing at both ends and tab hooks in between.
  std::vector<HookSpec> build(const std::vector<std::int64_t>& starts, const std::vector<std::int64_t>& tips,
                              bool up, std::vector<HookRole> roles = {}) const {
    const std::size_t n = starts.size();
    if (tips.size() != n || (!roles.empty() && roles.size() != n)) throw ChainError("hook stack: list sizes differ");
    std::vector<HookSpec> out;
    for (std::size_t j = 0; j < n; ++j) {
      HookSpec h;
      h.up = up;
      h.role = !roles.empty() ? roles[j] : (j == 0 || j + 1 == n) ? HookRole::Stabilizing : HookRole::Tab;
      const std::int64_t d = depth(n, j), G = reach(n);
      h.first = h.role == HookRole::Tab ? d - 6 : d;
      h.middle = h.role == HookRole::Tab ? G - d - 2 : G - d;
      h.last = h.first - 1;
      h.horizontal = tips[j] - starts[j];
      h.l_min = l_min;
      h.margin = margin;
      h.construction_width = construction_width;
      out.push_back(h);
    }
    return out;
  }
};

/// Hooks for a clause drawn on its own: tips three columns apart to the right.
inline std::vector<HookSpec> standalone_hooks(const std::vector<std::int64_t>& shifts, bool up, std::int64_t l_min) {
  auto starts = sheath_hook_starts(shifts);
  std::vector<std::int64_t> tips;
  for (std::size_t j = 0; j < starts.size(); ++j) tips.push_back(14 + 3 * static_cast<std::int64_t>(j));
  return HookStack{l_min, 50, 0}.build(starts, tips, up);
}

/// Bottom sheath corner path from (-9,-1) to (10,-1); `extended` names the
/// shift whose tab hook is pushed out.
inline std::vector<Point> sheath_path(const std::vector<std::int64_t>& shifts, std::vector<HookSpec> hooks,
                                      std::optional<std::int64_t> extended) {
  if (hooks.size() != shifts.size() + 2) throw ChainError("sheath needs one hook per tab plus two stabilizing hooks");
  for (auto& h : hooks) h.up = false;
  PathBuilder p({-9, -1});
  p.to({-8, -1}).append(hook_path(hooks.front(), {-8, -1}));
  p.to({-6, -1}).to({-6, -8});
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    const std::int64_t c = shifts[i];
    const std::int64_t y = extended == c ? -9 : -7;
    p.to({c - 1, -8}).to({c - 1, y}).to({c, y});
    p.append(hook_path(hooks[i + 1], {c, y}));
    p.to({c + 2, y}).to({c + 2, -8});
  }
  p.to({7, -8}).to({7, -1}).to({8, -1}).append(hook_path(hooks.back(), {8, -1}));
  p.to({10, -1});
  return p.take();
}

/// Hook start point of hook j on the bottom sheath.
inline Point sheath_hook_start(const std::vector<std::int64_t>& shifts, std::size_t j, std::optional<std::int64_t> extended) {
  if (j == 0) return {-8, -1};
  if (j == shifts.size() + 1) return {8, -1};
  const std::int64_t c = shifts[j - 1];
  return {c, extended == c ? -9 : -7};
}

/// Choice chain with its leads, from (-9,0) to (10,0).
inline std::vector<Point> clause_choice_path(std::int64_t shift, bool below) {
  PathBuilder p({-9, 0});
  p.to({0, 0}).append(choice_path(shift, below)).to({10, 0});
  return p.take();
}

/// Choice-chain extension plus top and bottom sheaths, in clause coordinates
/// (choice gadget's left endpoint at the origin).
inline ClauseFragments build_clause(ClauseSpec spec, std::int64_t l_min = 50) {
  check_clause(spec);
  ClauseFragments out;
  const auto below = clause_side_shifts(spec, false), above = clause_side_shifts(spec, true);
  if (spec.bottom_hooks.empty()) spec.bottom_hooks = standalone_hooks(below, false, l_min);
  if (spec.top_hooks.empty()) spec.top_hooks = standalone_hooks(above, true, l_min);
  for (const auto& h : spec.bottom_hooks) check_hook(h);
  for (const auto& h : spec.top_hooks) check_hook(h);

  out.choice.kind = "clause-choice";
  for (std::size_t i = 0; i < spec.connections.size(); ++i) {
    const auto& k = spec.connections[i];
    const std::int64_t ty = k.above ? 8 : -8;
    out.choice.add("choose" + std::to_string(i), clause_choice_path(k.shift, !k.above),
                   {{"left", {-9, 0}}, {"right", {10, 0}}, {"tab", {k.shift, ty}}});
  }

  auto sheath = [&](GadgetFragment& f, const std::vector<std::int64_t>& shifts, const std::vector<HookSpec>& hooks,
                    bool top) {
    f.kind = top ? "clause-top-sheath" : "clause-bottom-sheath";
    f.params = {{"hooks", static_cast<std::int64_t>(hooks.size())}};
    std::vector<std::optional<std::int64_t>> states{std::nullopt};
    for (auto c : shifts) states.push_back(c);
    for (const auto& st : states) {
      auto path = sheath_path(shifts, hooks, st);
      std::map<std::string, Point> anchors{{"left", {-9, -1}}, {"right", {10, -1}}};
      for (std::size_t j = 0; j < hooks.size(); ++j) {
        auto hs = hooks[j];
        hs.up = false;
        anchors["tip" + std::to_string(j)] = hook_tip(hs, sheath_hook_start(shifts, j, st));
      }
      if (top) {
        path = mirrored_y(path);
        for (auto& [n, p] : anchors) p.y = -p.y;
      }
      f.add(st ? "extend" + std::to_string(*st) : "retracted", path, std::move(anchors));
    }
  };
  sheath(out.bottom, below, spec.bottom_hooks, false);
  sheath(out.top, above, spec.top_hooks, true);
  return out;
}

// ---- frame ------------------------------------------------------------------

enum class FrameVariant : std::uint8_t { Closed, Hp, Square };

inline std::string_view frame_variant_name(FrameVariant v) {
  return v == FrameVariant::Closed ? "closed" : v == FrameVariant::Hp ? "hp" : "square";
}

/// Frame around an inner chain that enters at (X_hi, Y_lo) heading up and
/// leaves at (X_hi - 5, Y_lo) heading down, where [X_lo,X_hi]x[Y_lo,Y_hi] is
/// the inner bounding box after translation by `offset`.
/// The full chain is head + inner + tail (closed variant: inner + tail).
struct FramePlan {
  FrameVariant variant = FrameVariant::Closed;
  std::vector<Point> head, tail;
  Point offset{0, 0};
  std::int64_t side = 0;  ///< square side s (square variant)
};

inline FramePlan plan_frame(FrameVariant v, const Box& inner, std::int64_t L) {
  auto aligned = [](std::int64_t a) { return ((a % 5) + 5) % 5 == 0; };
  if (!aligned(inner.width()) || !aligned(inner.height()))
    throw ChainError("frame: inner box dimensions must be multiples of 5");
  if (inner.width() < 5) throw ChainError("frame: inner box too narrow");
  FramePlan f;
  f.variant = v;
  Box b = inner;
  if (v == FrameVariant::Square) {
    f.side = 10 * L + 1;
    f.offset = {10 * L - 5 - inner.max.x, 11 - inner.min.y};
    b = {inner.min + f.offset, inner.max + f.offset};
    if (b.min.x - 6 < 2 || b.max.y + 6 > f.side || 10 * L - 11 <= 9 * L)
      throw ChainError("frame: inner chain too short for the square frame");
  }
  const std::int64_t xl = b.min.x, xh = b.max.x, yl = b.min.y, yh = b.max.y;
  const Point entry{xh, yl}, exit{xh - 5, yl};
  PathBuilder tail(exit);
  tail.to({xh - 5, yl - 5}).to({xl - 5, yl - 5}).to({xl - 5, yh + 5}).to({xh + 5, yh + 5});
  switch (v) {
    case FrameVariant::Closed: {
      tail.to({xh + 5, yl - 5}).to({xh + 6, yl - 5}).to({xh + 6, yh + 6}).to({xl - 6, yh + 6});
      tail.to({xl - 6, yl - 6}).to({xh, yl - 6}).to(entry);
      f.head = {entry};
      break;
    }
    case FrameVariant::Hp: {
      if (10 * L + 5 <= xh - xl + 11) throw ChainError("frame: inner length too small for the hp frame");
      const std::int64_t xe = xh - 10 * L;
      tail.to({xh + 5, yl - 10}).to({xe, yl - 10});
      PathBuilder head({xe, yl - 11});
      head.to({xh + 6, yl - 11}).to({xh + 6, yh + 6}).to({xl - 6, yh + 6}).to({xl - 6, yl - 6});
      head.to({xh, yl - 6}).to(entry);
      f.head = head.take();
      break;
    }
    case FrameVariant::Square: {
      f.tail = {exit};
      const std::int64_t s = f.side, a = xl - 6, yu = yh + 5, yt = yu + 1, xr = xh + 5;
      PathBuilder head({0, s});
      head.to({0, 0}).to({s, 0}).to({s, yt}).to({a, yt}).to({a, 6}).to({a + 1, 6}).to({a + 1, yu});
      head.to({xr, yu}).to({xr, 6}).to({xh, 6}).to(entry);
      f.head = head.take();
      PathBuilder t2(exit);
      t2.to({xh - 5, 1}).to({1, 1}).to({1, s});
      f.tail = t2.take();
      return f;
    }
  }
  f.tail = tail.take();
  return f;
}

/// Segment lengths and turns of a closed corner cycle given without repeating
/// its first point.
inline PathEncoding encode_cycle(const std::vector<Point>& c) {
  std::vector<Point> open(c);
  open.push_back(c.front());
  open.push_back(c[1]);
  auto e = encode_path(open);
  e.segments.lengths.pop_back();
  e.segments.topology = Topology::Closed;
  // turn at v0 closes the cycle and comes first
  TurnSequence t;
  t.turns.push_back(e.turns.turns.back());
  t.turns.insert(t.turns.end(), e.turns.turns.begin(), e.turns.turns.end() - 1);
  e.turns = t;
  return e;
}

/// Frame drawn around an empty inner box: the inner chain is stood in for by
/// the single edge of length 5 from the entry to the exit.
inline GadgetFragment build_frame(FrameVariant v, const Box& inner, std::int64_t L) {
  auto plan = plan_frame(v, inner, L);
  GadgetFragment f;
  f.kind = std::string("frame-") + std::string(frame_variant_name(v));
  f.params = {{"L", L}, {"side", plan.side}};
  PathBuilder p(plan.head.front());
  p.append(plan.head).to(plan.tail.front()).append(plan.tail);
  std::map<std::string, Point> anchors{{"entry", plan.head.back()}, {"exit", plan.tail.front()}};
  if (v == FrameVariant::Closed) {
    auto pts = p.take();
    pts.pop_back();
    auto e = encode_cycle(pts);
    f.segments = e.segments;
    f.intended.push_back({"frame", e.turns, e.pose, std::move(anchors)});
    return f;
  }
  auto pts = p.take();
  if (v == FrameVariant::Hp) {
    anchors["h_start"] = pts.front();
    anchors["h_end"] = pts.back();
  }
  f.add("frame", pts, std::move(anchors));
  return f;
}

}  // namespace chainfold
