#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "chainfold/core_model.hpp"
#include "chainfold/fold_engine.hpp"

namespace chainfold {

struct SearchOptions {
  std::uint64_t budget = 50'000'000;  // segment placements
  bool deterministic = true;
  std::optional<Box> box;              // translation-free: configuration must fit a box of this size
  unsigned parallel = 1;
  bool prune_closure = true;           // closed chains: L1 + parity reachability
  bool prune_bound = true;             // HP admissible bound
};

enum class SolveStatus { Found, Exhausted, BudgetExceeded };

inline std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Found: return "found";
    case SolveStatus::Exhausted: return "exhausted";
    default: return "budget-exceeded";
  }
}

struct SolveResult {
  SolveStatus status = SolveStatus::Exhausted;
  std::optional<TurnSequence> witness;
  std::uint64_t nodes = 0;
  std::optional<std::int64_t> objective;  // HP: best contact count
};

class BudgetExceeded : public ChainError {
 public:
  BudgetExceeded(std::uint64_t nodes, std::uint64_t found)
      : ChainError("node budget exceeded after " + std::to_string(nodes) + " nodes (" + std::to_string(found) +
                   " foldings found so far)"),
        nodes_(nodes),
        found_(found) {}
  std::uint64_t nodes() const { return nodes_; }
  std::uint64_t partial_count() const { return found_; }

 private:
  std::uint64_t nodes_, found_;
};

/// Constraints for exhaustive enumeration. Pins map vertex index to point;
/// obstacles are points no vertex may occupy.
struct FoldConstraints {
  Pose pose{};
  std::vector<std::pair<std::int64_t, Point>> pins;
  std::optional<Box> box;  // absolute box, relative to the pose frame
  PointSet obstacles;
};

namespace detail {

/// Per-segment depth-first walker over one chain. Runs are straight pieces in
/// chain order from v_0; every run after the first begins at a corner.
class FoldSearch {
 public:
  enum class Mode { Enumerate, First, MaxContacts };

  struct Setup {
    Topology topology = Topology::Open;
    std::vector<std::int64_t> runs;
    bool v0_corner = false;  // closed chains
    std::optional<std::vector<Color>> colors;
    FoldConstraints cons;
    std::optional<std::pair<std::int64_t, std::int64_t>> extent;  // max width, height
    bool fix_first_left = false;
    bool prune_closure = true;
    bool prune_bound = true;
  };

  FoldSearch(const Setup& s, Mode mode, std::atomic<std::uint64_t>& nodes, std::uint64_t budget)
      : s_(s), mode_(mode), nodes_(nodes), budget_(budget) {
    std::int64_t total = 0;
    for (auto r : s_.runs) total += r;
    total_edges_ = total;
    suffix_.assign(s_.runs.size() + 1, 0);
    for (std::size_t i = s_.runs.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + s_.runs[i];
    pins_ = s_.cons.pins;
    std::sort(pins_.begin(), pins_.end());
    if (s_.colors) {
      const auto& c = *s_.colors;
      // Number of H vertices w < u with u - w odd and >= 3, per u.
      std::vector<std::int64_t> h_even(c.size() + 1, 0), h_odd(c.size() + 1, 0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        h_even[i + 1] = h_even[i] + (c[i] == Color::H && i % 2 == 0);
        h_odd[i + 1] = h_odd[i] + (c[i] == Color::H && i % 2 == 1);
      }
      cap_.assign(c.size(), 0);
      const std::size_t n = c.size();
      for (std::size_t u = 0; u < n; ++u) {
        if (c[u] != Color::H) continue;
        std::int64_t partners = 0;
        if (u >= 3) partners = (u % 2 == 0) ? h_odd[u - 2] : h_even[u - 2];
        const std::int64_t slots = (u == 0 || u + 1 == n) ? 3 : 2;
        cap_[u] = std::min(partners, slots);
      }
      cap_suffix_.assign(n + 1, 0);
      for (std::size_t u = n; u-- > 0;) cap_suffix_[u] = cap_suffix_[u + 1] + cap_[u];
    }
  }

  std::vector<TurnSequence> found;
  std::uint64_t found_count = 0;
  std::int64_t best = -1;
  std::optional<TurnSequence> best_witness;
  bool budget_hit = false;
  std::function<bool(const TurnSequence&)> sink;  // Enumerate: return false to stop
  const std::atomic<std::int64_t>* shared_best = nullptr;
  std::function<void(std::int64_t)> publish_best;

  /// Runs the search below a fixed prefix of turn choices (runs 1..prefix.size()).
  void run(const std::vector<Turn>& prefix) {
    reset();
    prefix_ = prefix;
    place_first();
  }

  /// Collects surviving prefixes of the given depth (for work splitting).
  std::vector<std::vector<Turn>> split(std::size_t depth) {
    reset();
    split_depth_ = depth;
    collecting_ = true;
    place_first();
    collecting_ = false;
    return std::move(prefixes_);
  }

 private:
  const Setup& s_;
  Mode mode_;
  std::atomic<std::uint64_t>& nodes_;
  std::uint64_t budget_;
  std::int64_t total_edges_ = 0;
  std::vector<std::int64_t> suffix_;
  std::vector<std::pair<std::int64_t, Point>> pins_;
  std::vector<std::int64_t> cap_, cap_suffix_;

  std::unordered_map<Point, std::int64_t, PointHash> occ_;
  std::vector<Turn> turns_;
  std::vector<Turn> prefix_;
  std::int64_t contacts_ = 0;
  Box bbox_{};
  bool stop_ = false;
  bool collecting_ = false;
  std::size_t split_depth_ = 0;
  std::vector<std::vector<Turn>> prefixes_;

  void reset() {
    occ_.clear();
    occ_.reserve(static_cast<std::size_t>(std::min<std::int64_t>(total_edges_ + 2, 1 << 22)) * 2);
    turns_.clear();
    contacts_ = 0;
    stop_ = false;
    budget_hit = false;
    prefixes_.clear();
    prefix_.clear();
  }

  bool is_h(std::int64_t v) const { return s_.colors && (*s_.colors)[static_cast<std::size_t>(v)] == Color::H; }

  bool admissible(std::int64_t v, Point p) const {
    if (s_.cons.obstacles.count(p)) return false;
    if (s_.cons.box && !s_.cons.box->contains(p)) return false;
    auto it = std::lower_bound(pins_.begin(), pins_.end(), std::make_pair(v, Point{std::numeric_limits<std::int64_t>::min(), 0}));
    if (it != pins_.end() && it->first == v && it->second != p) return false;
    return true;
  }

  // Reachability of the next pin after vertex v placed at p.
  bool pins_reachable(std::int64_t v, Point p) const {
    auto it = std::upper_bound(pins_.begin(), pins_.end(), std::make_pair(v, Point{std::numeric_limits<std::int64_t>::max(), 0}));
    if (it == pins_.end()) return true;
    const std::int64_t gap = it->first - v;
    const std::int64_t d = l1_distance(p, it->second);
    return d <= gap && (gap - d) % 2 == 0;
  }

  std::int64_t hh_gain(std::int64_t v, Point p) const {
    std::int64_t g = 0;
    for (Heading h : {Heading::PosX, Heading::PosY, Heading::NegX, Heading::NegY}) {
      auto it = occ_.find(p + unit(h));
      if (it == occ_.end()) continue;
      const std::int64_t w = it->second;
      if (v - w >= 2 && is_h(w)) ++g;
    }
    return g;
  }

  void place_first() {
    const Point o = s_.cons.pose.origin;
    if (!admissible(0, o)) return;
    occ_.emplace(o, 0);
    bbox_ = {o, o};
    place_run(0, o, s_.cons.pose.heading, 0);
    occ_.erase(o);
  }

  // Places run i starting after vertex v (at p), heading h already chosen.
  void place_run(std::size_t i, Point p, Heading h, std::int64_t v) {
    if (stop_) return;
    if (nodes_.fetch_add(1, std::memory_order_relaxed) + 1 > budget_) {
      budget_hit = true;
      stop_ = true;
      return;
    }
    const std::int64_t len = s_.runs[i];
    const bool last_run = i + 1 == s_.runs.size();
    const bool closed = s_.topology == Topology::Closed;
    const Point step = unit(h);
    const Box saved_box = bbox_;
    const std::int64_t saved_contacts = contacts_;
    std::int64_t placed = 0;
    Point q = p;
    bool ok = true;
    for (std::int64_t k = 1; k <= len; ++k) {
      q = p + step * k;
      const std::int64_t w = v + k;
      if (closed && last_run && k == len) {
        if (q != s_.cons.pose.origin) ok = false;
        break;
      }
      if (occ_.count(q) || !admissible(w, q)) {
        ok = false;
        break;
      }
      if (s_.extent) {
        Box b = bbox_;
        b.min.x = std::min(b.min.x, q.x);
        b.min.y = std::min(b.min.y, q.y);
        b.max.x = std::max(b.max.x, q.x);
        b.max.y = std::max(b.max.y, q.y);
        if (b.width() > s_.extent->first || b.height() > s_.extent->second) {
          ok = false;
          break;
        }
        bbox_ = b;
      }
      if (s_.colors && is_h(w)) contacts_ += hh_gain(w, q);
      occ_.emplace(q, w);
      ++placed;
    }
    if (ok) {
      const std::int64_t nv = v + len;
      if (last_run) {
        finish(h);
      } else if (prune_ok(i + 1, q, nv)) {
        descend(i + 1, q, h, nv);
      }
    }
    for (std::int64_t k = placed; k >= 1; --k) occ_.erase(p + step * k);
    bbox_ = saved_box;
    contacts_ = saved_contacts;
  }

  bool prune_ok(std::size_t next, Point q, std::int64_t v) const {
    if (!pins_reachable(v, q)) return false;
    if (s_.topology == Topology::Closed && s_.prune_closure) {
      const std::int64_t rem = suffix_[next];
      const std::int64_t d = l1_distance(q, s_.cons.pose.origin);
      if (d > rem || (rem - d) % 2 != 0) return false;
    }
    if (mode_ == Mode::MaxContacts && s_.prune_bound) {
      const std::int64_t ub = contacts_ + cap_suffix_[static_cast<std::size_t>(v + 1)];
      if (ub <= best) return false;
      if (shared_best && ub < shared_best->load(std::memory_order_relaxed)) return false;
    }
    return true;
  }

  void descend(std::size_t i, Point q, Heading h, std::int64_t v) {
    const std::size_t depth = turns_.size();  // turns chosen so far == i - 1
    if (collecting_ && depth == split_depth_) {
      prefixes_.push_back(turns_);
      return;
    }
    for (Turn t : {Turn::Left, Turn::Right}) {
      if (stop_) return;
      if (depth < prefix_.size() && t != prefix_[depth]) continue;
      if (depth == 0 && s_.fix_first_left && t == Turn::Right) continue;
      turns_.push_back(t);
      place_run(i, q, turned(h, t), v);
      turns_.pop_back();
    }
  }

  void finish(Heading last) {
    TurnSequence ts;
    if (s_.topology == Topology::Closed) {
      const Heading first = s_.cons.pose.heading;
      if (s_.v0_corner) {
        auto t = turn_between(last, first);
        if (!t) return;
        ts.turns.reserve(turns_.size() + 1);
        ts.turns.push_back(*t);
      } else if (last != first) {
        return;
      }
    }
    ts.turns.insert(ts.turns.end(), turns_.begin(), turns_.end());
    switch (mode_) {
      case Mode::Enumerate:
        ++found_count;
        if (sink) {
          if (!sink(ts)) stop_ = true;
        } else {
          found.push_back(std::move(ts));
        }
        break;
      case Mode::First:
        ++found_count;
        found.push_back(std::move(ts));
        stop_ = true;
        break;
      case Mode::MaxContacts:
        if (contacts_ > best) {
          best = contacts_;
          best_witness = std::move(ts);
          if (publish_best) publish_best(best);
        }
        break;
    }
  }
};

inline FoldSearch::Setup make_setup(const FixedAngleChain& chain) {
  FoldSearch::Setup s;
  s.topology = chain.topology;
  s.colors = chain.colors;
  std::int64_t run = 0;
  if (chain.topology == Topology::Open) {
    run = 1;
    for (auto a : chain.angles) {
      if (a == Angle::Corner) {
        s.runs.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    s.runs.push_back(run);
  } else {
    s.v0_corner = chain.angles.at(0) == Angle::Corner;
    const std::size_t n = chain.angles.size();
    run = 0;
    for (std::size_t v = 1; v <= n; ++v) {
      ++run;
      if (v < n && chain.angles[v] == Angle::Corner) {
        s.runs.push_back(run);
        run = 0;
      }
    }
    s.runs.push_back(run);
  }
  return s;
}

/// Splits the tree into prefix jobs and runs them on `width` threads. Results
/// are merged in prefix order, so output does not depend on thread timing.
template <typename Merge>
inline std::uint64_t run_split(const FoldSearch::Setup& setup, FoldSearch::Mode mode, const SearchOptions& opts,
                               Merge&& merge, std::atomic<std::int64_t>* shared_best = nullptr) {
  std::atomic<std::uint64_t> nodes{0};
  const unsigned width = std::max(1u, opts.parallel);
  if (width == 1 || setup.runs.size() < 3) {
    FoldSearch fs(setup, mode, nodes, opts.budget);
    fs.run({});
    merge(0, fs);
    return nodes.load();
  }
  std::size_t depth = 0;
  while ((std::size_t{1} << depth) < 8 * width && depth + 2 < setup.runs.size() && depth < 16) ++depth;
  std::vector<std::vector<Turn>> prefixes;
  {
    FoldSearch fs(setup, mode, nodes, opts.budget);
    prefixes = fs.split(depth);
  }
  std::vector<std::unique_ptr<FoldSearch>> jobs(prefixes.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop_all{false};
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= prefixes.size()) return;
      auto fs = std::make_unique<FoldSearch>(setup, mode, nodes, opts.budget);
      if (shared_best) {
        fs->shared_best = shared_best;
        fs->publish_best = [shared_best](std::int64_t v) {
          std::int64_t cur = shared_best->load();
          while (v > cur && !shared_best->compare_exchange_weak(cur, v)) {
          }
        };
      }
      if (!stop_all.load()) fs->run(prefixes[j]);
      if (fs->budget_hit) stop_all = true;
      std::lock_guard<std::mutex> lock(mu);
      jobs[j] = std::move(fs);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < width; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (std::size_t j = 0; j < jobs.size(); ++j) merge(j, *jobs[j]);
  return nodes.load();
}

/// Box sizes to try with the first edge along +x: a W x H box also admits
/// configurations rotated a quarter turn, i.e. the H x W extent.
inline std::vector<std::optional<std::pair<std::int64_t, std::int64_t>>> box_extents(const SearchOptions& opts) {
  if (!opts.box) return {std::nullopt};
  const auto w = opts.box->width(), h = opts.box->height();
  if (w == h) return {std::make_pair(w, h)};
  return {std::make_pair(w, h), std::make_pair(h, w)};
}

}  // namespace detail

/// Decides whether a closed chain has a noncrossing closed configuration.
inline SolveResult solve_flatten(const FixedAngleChain& chain, const SearchOptions& opts = {}) {
  if (chain.topology != Topology::Closed) throw ChainError("solve-flatten needs a closed chain");
  SolveResult r;
  if (chain.angles.size() % 2 != 0 || chain.corner_count() == 0) return r;
  auto setup = detail::make_setup(chain);
  setup.colors.reset();
  setup.fix_first_left = true;
  setup.prune_closure = opts.prune_closure;
  bool hit = false;
  for (const auto& ext : detail::box_extents(opts)) {
    setup.extent = ext;
    r.nodes += detail::run_split(setup, detail::FoldSearch::Mode::First, opts, [&](std::size_t, detail::FoldSearch& fs) {
      if (!r.witness && !fs.found.empty()) r.witness = fs.found.front();
      hit = hit || fs.budget_hit;
    });
    if (r.witness || hit) break;
  }
  if (r.witness) r.status = SolveStatus::Found;
  else if (hit) r.status = SolveStatus::BudgetExceeded;
  return r;
}

/// Maximum H-H contact count over noncrossing configurations of an open
/// bicolored chain, with the first optimal witness in L-before-R order.
inline SolveResult solve_hp(const FixedAngleChain& chain, const SearchOptions& opts = {}) {
  if (!chain.colors) throw ChainError("solve-hp needs H/P colors");
  if (chain.topology != Topology::Open) throw ChainError("solve-hp needs an open chain");
  if (chain.colors->size() != chain.vertex_count()) throw ChainError("color list length does not match vertex count");
  SolveResult r;
  auto setup = detail::make_setup(chain);
  setup.fix_first_left = true;
  setup.prune_bound = opts.prune_bound;
  std::atomic<std::int64_t> shared{-1};
  bool hit = false;
  std::int64_t best = -1;
  for (const auto& ext : detail::box_extents(opts)) {
    setup.extent = ext;
    r.nodes += detail::run_split(
        setup, detail::FoldSearch::Mode::MaxContacts, opts,
        [&](std::size_t, detail::FoldSearch& fs) {
          hit = hit || fs.budget_hit;
          if (fs.best > best) {
            best = fs.best;
            r.witness = fs.best_witness;
          }
        },
        &shared);
    if (hit) break;
  }
  if (hit) {
    r.status = SolveStatus::BudgetExceeded;
    if (best >= 0) r.objective = best;
    return r;
  }
  if (best >= 0) {
    r.status = SolveStatus::Found;
    r.objective = best;
  }
  return r;
}

/// Decides whether an open chain fits, noncrossing, inside an s x s square
/// (coordinates 0..s inclusive on both axes).
inline SolveResult solve_pack(const FixedAngleChain& chain, std::int64_t s, const SearchOptions& opts = {}) {
  if (s <= 0) throw ChainError("square side must be positive");
  if (chain.topology != Topology::Open) throw ChainError("solve-pack needs an open chain");
  auto setup = detail::make_setup(chain);
  setup.colors.reset();
  setup.fix_first_left = true;
  setup.extent = std::make_pair(s, s);
  SolveResult r;
  bool hit = false;
  r.nodes = detail::run_split(setup, detail::FoldSearch::Mode::First, opts, [&](std::size_t, detail::FoldSearch& fs) {
    if (!r.witness && !fs.found.empty()) r.witness = fs.found.front();
    hit = hit || fs.budget_hit;
  });
  if (r.witness) r.status = SolveStatus::Found;
  else if (hit) r.status = SolveStatus::BudgetExceeded;
  return r;
}

/// Streams every turn sequence whose embedding (at constraints.pose) is
/// noncrossing, closes (closed chains), and meets pins/box/obstacles. The
/// callback may return false to stop early. Throws BudgetExceeded.
inline std::uint64_t for_each_folding(const FixedAngleChain& chain, const FoldConstraints& cons,
                                      const std::function<bool(const TurnSequence&)>& fn,
                                      std::uint64_t budget = 50'000'000) {
  auto setup = detail::make_setup(chain);
  setup.colors.reset();
  setup.cons = cons;
  std::atomic<std::uint64_t> nodes{0};
  detail::FoldSearch fs(setup, detail::FoldSearch::Mode::Enumerate, nodes, budget);
  fs.sink = fn;
  fs.run({});
  if (fs.budget_hit) throw BudgetExceeded(nodes.load(), fs.found_count);
  return fs.found_count;
}

inline std::vector<TurnSequence> enumerate_foldings(const FixedAngleChain& chain, const FoldConstraints& cons = {},
                                                    std::uint64_t budget = 50'000'000) {
  std::vector<TurnSequence> out;
  for_each_folding(chain, cons, [&](const TurnSequence& t) {
    out.push_back(t);
    return true;
  }, budget);
  return out;
}

}  // namespace chainfold
