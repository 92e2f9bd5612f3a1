#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chainfold {

/// Raised for malformed inputs and violated preconditions.
class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Topology : std::uint8_t { Open, Closed };
enum class Angle : std::uint8_t { Straight, Corner };
enum class Turn : std::uint8_t { Left, Right };
enum class Color : std::uint8_t { H, P };

inline Turn flipped(Turn t) { return t == Turn::Left ? Turn::Right : Turn::Left; }

inline std::string_view topology_name(Topology t) {
  return t == Topology::Open ? "open" : "closed";
}

/// Fixed-angle orthogonal equilateral chain.
///
/// Open chains with n vertices carry n-2 angles (interior vertices v_1..v_{n-2});
/// closed chains with n edges carry n angles (v_0..v_{n-1}). Every edge has
/// unit length.
struct FixedAngleChain {
  Topology topology = Topology::Open;
  std::vector<Angle> angles;
  std::optional<std::vector<Color>> colors;

  std::size_t edge_count() const {
    return topology == Topology::Open ? angles.size() + 1 : angles.size();
  }
  std::size_t vertex_count() const {
    return topology == Topology::Open ? angles.size() + 2 : angles.size();
  }
  std::size_t corner_count() const {
    return static_cast<std::size_t>(std::count(angles.begin(), angles.end(), Angle::Corner));
  }
  /// Angle at vertex v (open chains: endpoints have no angle).
  std::optional<Angle> angle_at(std::size_t v) const {
    if (topology == Topology::Closed) return angles.at(v % angles.size());
    if (v == 0 || v + 1 >= vertex_count()) return std::nullopt;
    return angles.at(v - 1);
  }

  friend bool operator==(const FixedAngleChain&, const FixedAngleChain&) = default;
};

/// Maximal straight runs between corners. Closed decompositions are cyclic;
/// equality compares canonical rotations.
struct SegmentDecomposition {
  Topology topology = Topology::Open;
  std::vector<std::int64_t> lengths;

  std::int64_t total_length() const {
    std::int64_t s = 0;
    for (auto l : lengths) s += l;
    return s;
  }

  /// Lexicographically smallest rotation for closed lists; identity for open.
  SegmentDecomposition canonical() const {
    if (topology == Topology::Open || lengths.size() < 2) return *this;
    const std::size_t n = lengths.size();
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t i = 0; i < n; ++i) {
        auto a = lengths[(r + i) % n];
        auto b = lengths[(best + i) % n];
        if (a != b) {
          if (a < b) best = r;
          break;
        }
      }
    }
    SegmentDecomposition out{topology, {}};
    out.lengths.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.lengths.push_back(lengths[(best + i) % n]);
    return out;
  }

  friend bool operator==(const SegmentDecomposition& a, const SegmentDecomposition& b) {
    if (a.topology != b.topology) return false;
    return a.canonical().lengths == b.canonical().lengths;
  }
};

/// One left/right choice per Corner, in chain order. For closed chains the
/// first entry belongs to v_0 whenever v_0 is a corner.
struct TurnSequence {
  std::vector<Turn> turns;

  std::size_t size() const { return turns.size(); }
  TurnSequence mirrored() const {
    TurnSequence out = *this;
    for (auto& t : out.turns) t = flipped(t);
    return out;
  }
  friend bool operator==(const TurnSequence&, const TurnSequence&) = default;
};

/// Decomposition read in chain order starting at the first corner at or
/// after v_0 (closed) or at v_0 (open). Not canonicalized.
inline SegmentDecomposition raw_segments_of(const FixedAngleChain& chain) {
  SegmentDecomposition out{chain.topology, {}};
  if (chain.topology == Topology::Open) {
    std::int64_t run = 1;
    for (auto a : chain.angles) {
      if (a == Angle::Corner) {
        out.lengths.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    out.lengths.push_back(run);
    return out;
  }
  const std::size_t n = chain.angles.size();
  auto first = std::find(chain.angles.begin(), chain.angles.end(), Angle::Corner);
  if (first == chain.angles.end())
    throw ChainError("closed chain without corners has no segment decomposition");
  const std::size_t start = static_cast<std::size_t>(first - chain.angles.begin());
  std::int64_t run = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    ++run;
    if (chain.angles[(start + i) % n] == Angle::Corner) {
      out.lengths.push_back(run);
      run = 0;
    }
  }
  return out;
}

/// Maximal straight runs; closed results are returned in canonical rotation.
inline SegmentDecomposition segments_of(const FixedAngleChain& chain) {
  return raw_segments_of(chain).canonical();
}

/// Inverse of segments_of. Closed chains start with v_0 at the corner that
/// begins the first listed segment.
inline FixedAngleChain chain_from_segments(const SegmentDecomposition& d,
                                           std::optional<std::vector<Color>> colors = std::nullopt) {
  if (d.lengths.empty()) throw ChainError("segment list is empty");
  for (auto l : d.lengths)
    if (l < 1) throw ChainError("segment length must be at least 1");
  FixedAngleChain c;
  c.topology = d.topology;
  const auto total = static_cast<std::size_t>(d.total_length());
  if (d.topology == Topology::Open) {
    c.angles.reserve(total > 0 ? total - 1 : 0);
    for (std::size_t s = 0; s < d.lengths.size(); ++s) {
      if (s > 0) c.angles.push_back(Angle::Corner);
      for (std::int64_t i = 1; i < d.lengths[s]; ++i) c.angles.push_back(Angle::Straight);
    }
  } else {
    c.angles.reserve(total);
    for (auto l : d.lengths) {
      c.angles.push_back(Angle::Corner);
      for (std::int64_t i = 1; i < l; ++i) c.angles.push_back(Angle::Straight);
    }
  }
  if (colors && colors->size() != c.vertex_count())
    throw ChainError("color list length does not match vertex count");
  c.colors = std::move(colors);
  return c;
}

struct ValidationIssue {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has(std::string_view code) const {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const ValidationIssue& i) { return i.code == code; });
  }
};

/// Structural check. Closed chains need an even edge count and at least one
/// corner to admit any planar configuration.
inline ValidationReport validate(const FixedAngleChain& chain) {
  ValidationReport r;
  if (chain.topology == Topology::Closed) {
    if (chain.angles.size() % 2 != 0)
      r.issues.push_back({"odd-parity", "odd edge count: no 2D configuration exists"});
    if (chain.corner_count() == 0)
      r.issues.push_back({"no-corner", "closed chain has no corner"});
  } else if (chain.edge_count() < 1) {
    r.issues.push_back({"empty", "open chain needs at least one edge"});
  }
  if (chain.colors && chain.colors->size() != chain.vertex_count())
    r.issues.push_back({"color-count", "one color per vertex required"});
  return r;
}

// ---- text encodings ---------------------------------------------------------

inline char angle_char(Angle a) { return a == Angle::Corner ? 'C' : 'S'; }
inline char turn_char(Turn t) { return t == Turn::Left ? 'L' : 'R'; }
inline char color_char(Color c) { return c == Color::H ? 'H' : 'P'; }

inline std::string to_string(const TurnSequence& t) {
  std::string s;
  s.reserve(t.size());
  for (auto x : t.turns) s.push_back(turn_char(x));
  return s;
}

inline TurnSequence parse_turns(std::string_view s) {
  TurnSequence t;
  t.turns.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 'L') t.turns.push_back(Turn::Left);
    else if (s[i] == 'R') t.turns.push_back(Turn::Right);
    else throw ChainError("turn string: column " + std::to_string(i + 1) + ": expected L or R");
  }
  return t;
}

}  // namespace chainfold
