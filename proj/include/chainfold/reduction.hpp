#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <tuple>
#include <variant>
#include <string>
#include <utility>
#include <vector>

#include "chainfold/core_model.hpp"
#include "chainfold/fold_engine.hpp"
#include "chainfold/gadgets.hpp"

namespace chainfold {

// ---- formulas ---------------------------------------------------------------

/// Signed variable index, DIMACS style: +v or -v with v >= 1.
using Literal = std::int32_t;

struct CnfFormula {
  std::int32_t variables = 0;
  std::vector<std::vector<Literal>> clauses;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

using Assignment = std::map<std::int32_t, bool>;

inline void check_formula(const CnfFormula& f) {
  if (f.variables < 0) throw ChainError("negative variable count");
  for (std::size_t c = 0; c < f.clauses.size(); ++c) {
    const auto& cl = f.clauses[c];
    if (cl.empty()) throw ChainError("clause " + std::to_string(c + 1) + " is empty");
    if (cl.size() > 3) throw ChainError("clause " + std::to_string(c + 1) + " has more than three literals");
    for (auto l : cl)
      if (l == 0 || std::abs(l) > f.variables)
        throw ChainError("clause " + std::to_string(c + 1) + " references an undeclared variable");
  }
}

inline bool literal_value(Literal l, const Assignment& a) {
  auto it = a.find(std::abs(l));
  if (it == a.end()) throw ChainError("assignment misses variable " + std::to_string(std::abs(l)));
  return l > 0 ? it->second : !it->second;
}

/// Index of the first clause the assignment leaves unsatisfied.
inline std::optional<std::size_t> first_unsatisfied(const CnfFormula& f, const Assignment& a) {
  for (std::size_t c = 0; c < f.clauses.size(); ++c) {
    bool sat = false;
    for (auto l : f.clauses[c]) sat = sat || literal_value(l, a);
    if (!sat) return c;
  }
  return std::nullopt;
}

inline bool satisfies(const CnfFormula& f, const Assignment& a) { return !first_unsatisfied(f, a); }

/// All satisfying assignments by truth table.
inline std::vector<Assignment> satisfying_assignments(const CnfFormula& f) {
  if (f.variables > 24) throw ChainError("truth table too large");
  std::vector<Assignment> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.variables); ++mask) {
    Assignment a;
    for (std::int32_t v = 1; v <= f.variables; ++v) a[v] = (mask >> (v - 1)) & 1;
    if (satisfies(f, a)) out.push_back(std::move(a));
  }
  return out;
}

// ---- leveled drawings -------------------------------------------------------

struct DrawingPosition {
  std::int64_t row = 0;
  double x = 0;

  friend bool operator==(const DrawingPosition&, const DrawingPosition&) = default;
};

/// Variables sit on odd rows, clauses on even rows; rows grow downward.
struct LeveledDrawing {
  std::vector<DrawingPosition> variables;  ///< index v-1
  std::vector<DrawingPosition> clauses;

  std::int64_t levels() const {
    std::int64_t r = 0;
    for (const auto& p : variables) r = std::max(r, p.row);
    for (const auto& p : clauses) r = std::max(r, p.row);
    return r;
  }
};

namespace detail {

struct DPoint {
  double x, y;
};

inline double orient(DPoint a, DPoint b, DPoint c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

inline bool on_segment(DPoint a, DPoint b, DPoint p) {
  return std::fabs(orient(a, b, p)) < 1e-12 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool segments_meet(DPoint a, DPoint b, DPoint c, DPoint d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
}

/// Distinct clause-variable incidences (clause index, variable).
inline std::vector<std::pair<std::size_t, std::int32_t>> incidences(const CnfFormula& f) {
  std::vector<std::pair<std::size_t, std::int32_t>> e;
  for (std::size_t c = 0; c < f.clauses.size(); ++c)
    for (auto l : f.clauses[c]) e.emplace_back(c, std::abs(l));
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

}  // namespace detail

/// Checks row parity and that no two incidence edges meet except at a shared
/// endpoint and no edge passes through a vertex.
inline void check_drawing(const CnfFormula& f, const LeveledDrawing& d) {
  check_formula(f);
  if (d.variables.size() != static_cast<std::size_t>(f.variables)) throw ChainError("drawing: variable count mismatch");
  if (d.clauses.size() != f.clauses.size()) throw ChainError("drawing: clause count mismatch");
  std::vector<detail::DPoint> vp, cp;
  for (std::size_t v = 0; v < d.variables.size(); ++v) {
    const auto& p = d.variables[v];
    if (p.row < 1 || p.row % 2 != 1) throw ChainError("drawing: variable " + std::to_string(v + 1) + " not on an odd row");
    vp.push_back({p.x, static_cast<double>(p.row)});
  }
  for (std::size_t c = 0; c < d.clauses.size(); ++c) {
    const auto& p = d.clauses[c];
    if (p.row < 2 || p.row % 2 != 0) throw ChainError("drawing: clause " + std::to_string(c + 1) + " not on an even row");
    cp.push_back({p.x, static_cast<double>(p.row)});
  }
  std::vector<detail::DPoint> all(vp);
  all.insert(all.end(), cp.begin(), cp.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (all[i].x == all[j].x && all[i].y == all[j].y) throw ChainError("drawing: two vertices share a position");
  const auto e = detail::incidences(f);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto a = cp[e[i].first], b = vp[static_cast<std::size_t>(e[i].second - 1)];
    for (std::size_t k = 0; k < all.size(); ++k) {
      const bool endpoint = (k < vp.size() && static_cast<std::int32_t>(k + 1) == e[i].second) ||
                            (k >= vp.size() && k - vp.size() == e[i].first);
      if (!endpoint && detail::on_segment(a, b, all[k]))
        throw ChainError("drawing: edge of clause " + std::to_string(e[i].first + 1) + " passes through a vertex");
    }
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      if (e[i].first == e[j].first || e[i].second == e[j].second) continue;
      const auto c = cp[e[j].first], dd = vp[static_cast<std::size_t>(e[j].second - 1)];
      if (detail::segments_meet(a, b, c, dd))
        throw ChainError("drawing: edges of clauses " + std::to_string(e[i].first + 1) + " and " +
                         std::to_string(e[j].first + 1) + " cross");
    }
  }
}

// ---- linked layout ----------------------------------------------------------

/// One hook of a sheath row, in layout units on the row's x axis.
struct LayoutHook {
  HookRole role = HookRole::Stabilizing;
  std::size_t clause = 0;   ///< index into LinkedLayout::clauses
  std::size_t literal = 0;  ///< tab hooks: literal slot 0..2
  std::int64_t start = 0;
  std::int64_t tip = 0;
};

struct SheathRow {
  std::int64_t level = 0;
  bool top = false;
  std::vector<LayoutHook> hooks;  ///< ordered by start column
};

struct LayoutClause {
  std::size_t clause = 0;  ///< index into the normalized formula
  std::int64_t level = 0;
  std::int64_t x = 0;      ///< choice gadget's left endpoint, layout units
  std::array<Literal, 3> literals{};
  std::array<ClauseConnection, 3> connections{};
  std::array<std::size_t, 3> occurrence{};  ///< occurrence slot in the variable gadget
};

struct LayoutVariable {
  std::int32_t var = 0;
  std::int64_t level = 0;
  std::int64_t x = 0;  ///< gadget's left endpoint, layout units
  std::vector<VariableOccurrence> occurrences;
};

/// Rows top to bottom: insulation, then per level either a variable row or a
/// clause block (top sheath, choice, bottom sheath), each followed by insulation.
struct LinkedLayout {
  CnfFormula formula;                  ///< after duplication and padding
  std::int32_t original_variables = 0;
  std::size_t original_clauses = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> copies;  ///< (copy, variable it equals)
  LeveledDrawing drawing;              ///< drawing of the normalized formula
  std::int64_t levels = 0;
  std::int64_t quarter = 0;            ///< row width is 4 * quarter layout units
  std::vector<LayoutClause> clauses;
  std::vector<LayoutVariable> variables;  ///< index v-1
  std::vector<SheathRow> sheaths;

  std::int64_t width() const { return 4 * quarter; }
  bool is_clause_level(std::int64_t l) const { return l % 2 == 0; }
};

/// Extends an assignment of the original variables to the copies.
inline Assignment extend_assignment(const LinkedLayout& lay, Assignment a) {
  for (std::int32_t v = 1; v <= lay.original_variables; ++v)
    if (!a.count(v)) throw ChainError("assignment misses variable " + std::to_string(v));
  for (const auto& [copy, src] : lay.copies) a[copy] = a.at(src);
  return a;
}

inline Assignment restrict_assignment(const LinkedLayout& lay, const Assignment& a) {
  Assignment out;
  for (std::int32_t v = 1; v <= lay.original_variables; ++v) out[v] = a.at(v);
  return out;
}

namespace detail {

/// Copies every variable across the rows its long edges span. Returns the new
/// formula, drawing and (copy, source) pairs.
inline std::tuple<CnfFormula, LeveledDrawing, std::vector<std::pair<std::int32_t, std::int32_t>>> duplicate_long_edges(
    const CnfFormula& f, const LeveledDrawing& d) {
  CnfFormula g = f;
  LeveledDrawing e = d;
  std::vector<std::pair<std::int32_t, std::int32_t>> copies;
  constexpr double eps = 1e-6;
  const std::size_t m = f.clauses.size();
  for (std::size_t c = 0; c < m; ++c) {
    for (auto& l : g.clauses[c]) {
      const std::int32_t v = std::abs(l);
      const auto cv = d.clauses[c];
      const auto vv = d.variables[static_cast<std::size_t>(v - 1)];
      const std::int64_t span = cv.row - vv.row;
      if (std::llabs(span) <= 1) continue;
      const std::int64_t dir = span > 0 ? 1 : -1;
      auto x_at = [&](std::int64_t r) {
        return vv.x + (cv.x - vv.x) * static_cast<double>(r - vv.row) / static_cast<double>(span);
      };
      std::int32_t prev = v;
      for (std::int64_t r = vv.row + 2 * dir; r != cv.row + dir; r += 2 * dir) {
        const std::int32_t copy = ++g.variables;
        e.variables.push_back({r, x_at(r)});
        copies.emplace_back(copy, v);
        const std::int64_t rc = r - dir;
        g.clauses.push_back({-prev, copy});
        e.clauses.push_back({rc, x_at(rc) - eps});
        g.clauses.push_back({-copy, prev});
        e.clauses.push_back({rc, x_at(rc) + eps});
        prev = copy;
      }
      l = l > 0 ? prev : -prev;
    }
  }
  return {std::move(g), std::move(e), std::move(copies)};
}

/// Grille room needed for s stabilizing tips between two tabs of one variable.
inline std::int64_t stab_capacity(std::int64_t nulls) { return nulls == 0 ? 0 : (3 * nulls - 1) / 2 + 1; }

inline std::int64_t nulls_for(std::int64_t s) {
  std::int64_t n = 0;
  while (stab_capacity(n) < s) ++n;
  return n;
}

struct TipCursor {
  std::int64_t stab = 0, tab = 0;
  std::int64_t next_stab() {
    const std::int64_t t = stab;
    stab += 2;
    tab = std::max(tab, t + 2);
    return t;
  }
  void tab_at(std::int64_t a) {
    if (a < tab) throw ChainError("layout: tab tip collides with an earlier tip");
    stab = std::max(stab, a + 2);
    tab = std::max(tab, a + 3);
  }
  std::int64_t extent() const { return std::max(stab, tab); }
};

}  // namespace detail

/// Duplicates variables along long edges, pads clauses to three literals and
/// lays out gadgets: clauses 20 apart in the left quarter, variables placed
/// greedily in the right quarter so that every hook tip lands on its tab or on
/// free grille.
inline LinkedLayout normalize_to_adjacent_rows(const CnfFormula& formula, const LeveledDrawing& drawing) {
  check_drawing(formula, drawing);
  LinkedLayout lay;
  lay.original_variables = formula.variables;
  lay.original_clauses = formula.clauses.size();
  auto [g, d, copies] = detail::duplicate_long_edges(formula, drawing);
  for (auto& cl : g.clauses)
    while (cl.size() < 3) cl.push_back(cl.back());
  check_drawing(g, d);
  lay.formula = g;
  lay.drawing = d;
  lay.copies = copies;
  lay.levels = std::max<std::int64_t>(d.levels(), 1);

  auto by_x = [](const std::vector<DrawingPosition>& pos, std::int64_t row) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if (pos[i].row == row) ids.push_back(i);
    std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return pos[a].x < pos[b].x; });
    return ids;
  };

  // clauses: order, connections, shifts
  std::map<std::size_t, std::size_t> layout_of_clause;
  std::int64_t max_row_clauses = 0;
  for (std::int64_t level = 2; level <= lay.levels; level += 2) {
    auto ids = by_x(d.clauses, level);
    max_row_clauses = std::max<std::int64_t>(max_row_clauses, static_cast<std::int64_t>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      LayoutClause lc;
      lc.clause = ids[i];
      lc.level = level;
      lc.x = 11 + 20 * static_cast<std::int64_t>(i);
      const auto& lits = g.clauses[ids[i]];
      std::vector<std::size_t> below, above;
      for (std::size_t k = 0; k < 3; ++k) {
        lc.literals[k] = lits[k];
        const auto& vp = d.variables[static_cast<std::size_t>(std::abs(lits[k]) - 1)];
        if (std::llabs(vp.row - level) != 1) throw ChainError("layout: clause not adjacent to its variable");
        (vp.row > level ? below : above).push_back(k);
      }
      auto var_x = [&](std::size_t k) { return d.variables[static_cast<std::size_t>(std::abs(lits[k]) - 1)].x; };
      auto order = [&](std::size_t a, std::size_t b) { return var_x(a) < var_x(b) || (var_x(a) == var_x(b) && a < b); };
      std::sort(below.begin(), below.end(), order);
      std::sort(above.begin(), above.end(), order);
      std::int64_t shift = -4;
      for (auto k : below) lc.connections[k] = {false, std::exchange(shift, shift + 4)};
      for (auto k : above) lc.connections[k] = {true, std::exchange(shift, shift + 4)};
      layout_of_clause[ids[i]] = lay.clauses.size();
      lay.clauses.push_back(lc);
    }
  }

  // sheath rows with hooks in start order; tips filled in below
  for (std::int64_t level = 2; level <= lay.levels; level += 2) {
    for (bool top : {true, false}) {
      SheathRow row{level, top, {}};
      for (std::size_t ci = 0; ci < lay.clauses.size(); ++ci) {
        const auto& lc = lay.clauses[ci];
        if (lc.level != level) continue;
        row.hooks.push_back({HookRole::Stabilizing, ci, 0, lc.x - 8, 0});
        std::vector<std::size_t> slots;
        for (std::size_t k = 0; k < 3; ++k)
          if (lc.connections[k].above == top) slots.push_back(k);
        std::sort(slots.begin(), slots.end(),
                  [&](std::size_t a, std::size_t b) { return lc.connections[a].shift < lc.connections[b].shift; });
        for (auto k : slots) row.hooks.push_back({HookRole::Tab, ci, k, lc.x + lc.connections[k].shift, 0});
        row.hooks.push_back({HookRole::Stabilizing, ci, 0, lc.x + 8, 0});
      }
      lay.sheaths.push_back(std::move(row));
    }
  }
  auto sheath_at = [&](std::int64_t level, bool top) -> SheathRow* {
    for (auto& s : lay.sheaths)
      if (s.level == level && s.top == top) return &s;
    return nullptr;
  };

  // variables: occurrence lists and greedy placement (relative to the zone)
  lay.variables.resize(static_cast<std::size_t>(g.variables));
  for (std::int32_t v = 1; v <= g.variables; ++v) {
    lay.variables[static_cast<std::size_t>(v - 1)].var = v;
    lay.variables[static_cast<std::size_t>(v - 1)].level = d.variables[static_cast<std::size_t>(v - 1)].row;
  }
  std::int64_t zone = 0;
  for (std::int64_t level = 1; level <= lay.levels; level += 2) {
    SheathRow* hooks_above = sheath_at(level - 1, false);  // bottom sheath of the clause level above
    SheathRow* hooks_below = sheath_at(level + 1, true);   // top sheath of the clause level below
    const auto vars = by_x(d.variables, level);
    std::map<std::size_t, std::vector<std::size_t>> tabs_above, tabs_below;  // var index -> hook indices
    auto collect = [&](SheathRow* row, std::map<std::size_t, std::vector<std::size_t>>& out) {
      if (!row) return;
      for (std::size_t j = 0; j < row->hooks.size(); ++j) {
        const auto& h = row->hooks[j];
        if (h.role != HookRole::Tab) continue;
        out[static_cast<std::size_t>(std::abs(lay.clauses[h.clause].literals[h.literal]) - 1)].push_back(j);
      }
    };
    collect(hooks_above, tabs_above);
    collect(hooks_below, tabs_below);
    // occurrence lists: above tabs with nulls for interleaved stabilizing tips, then below
    auto append_side = [&](SheathRow* row, const std::vector<std::size_t>& tabs, bool above, LayoutVariable& var) {
      for (std::size_t t = 0; t < tabs.size(); ++t) {
        if (t > 0) {
          std::int64_t stabs = 0;
          for (std::size_t j = tabs[t - 1] + 1; j < tabs[t]; ++j) {
            if (row->hooks[j].role == HookRole::Tab) throw ChainError("layout: drawing order is not planar");
            ++stabs;
          }
          for (std::int64_t n = detail::nulls_for(stabs); n > 0; --n) var.occurrences.push_back({true, true, true});
        }
        auto& h = row->hooks[tabs[t]];
        auto& lc = lay.clauses[h.clause];
        lc.occurrence[h.literal] = var.occurrences.size();
        var.occurrences.push_back({lc.literals[h.literal] > 0, above, false});
      }
    };
    for (auto vi : vars) {
      auto& var = lay.variables[vi];
      append_side(hooks_above, tabs_above[vi], true, var);
      append_side(hooks_below, tabs_below[vi], false, var);
      if (var.occurrences.empty()) var.occurrences.push_back({true, true, true});
    }
    // placement
    detail::TipCursor ca, cb;
    std::size_t pa = 0, pb = 0;
    std::int64_t xmin = 0;
    auto flush = [&](SheathRow* row, std::size_t& p, std::size_t until, detail::TipCursor& cur) {
      for (; p < until; ++p) {
        auto& h = row->hooks[p];
        if (h.role == HookRole::Tab) throw ChainError("layout: drawing order is not planar");
        h.tip = cur.next_stab();
      }
    };
    for (auto vi : vars) {
      auto& var = lay.variables[vi];
      const auto& ta = tabs_above[vi];
      const auto& tb = tabs_below[vi];
      if (!ta.empty()) flush(hooks_above, pa, ta.front(), ca);
      if (!tb.empty()) flush(hooks_below, pb, tb.front(), cb);
      std::int64_t x = xmin;
      auto slot_of = [&](SheathRow* row, std::size_t j) {
        const auto& h = row->hooks[j];
        return static_cast<std::int64_t>(lay.clauses[h.clause].occurrence[h.literal]);
      };
      if (!ta.empty()) x = std::max(x, ca.tab - 10 - 3 * slot_of(hooks_above, ta.front()));
      if (!tb.empty()) x = std::max(x, cb.tab - 10 - 3 * slot_of(hooks_below, tb.front()));
      var.x = x;
      auto walk = [&](SheathRow* row, std::size_t& p, const std::vector<std::size_t>& tabs, detail::TipCursor& cur) {
        if (tabs.empty()) return;
        for (; p <= tabs.back(); ++p) {
          auto& h = row->hooks[p];
          if (h.role == HookRole::Tab) {
            h.tip = x + 10 + 3 * slot_of(row, p);
            cur.tab_at(h.tip);
          } else {
            h.tip = cur.next_stab();
          }
        }
      };
      walk(hooks_above, pa, ta, ca);
      walk(hooks_below, pb, tb, cb);
      xmin = x + variable_width(var.occurrences.size()) + 1;
    }
    if (hooks_above) flush(hooks_above, pa, hooks_above->hooks.size(), ca);
    if (hooks_below) flush(hooks_below, pb, hooks_below->hooks.size(), cb);
    zone = std::max({zone, xmin, ca.extent(), cb.extent()});
  }
  // a clause level at the bottom hangs its hooks over plain insulation
  if (auto* last = sheath_at(lay.levels, false); last && lay.levels % 2 == 0) {
    detail::TipCursor c;
    for (auto& h : last->hooks) h.tip = c.next_stab();
    zone = std::max(zone, c.extent());
  }

  lay.quarter = std::max({zone + 4, 20 * max_row_clauses + 3, std::int64_t{12}});
  const std::int64_t origin = 3 * lay.quarter + 1;
  for (auto& v : lay.variables) v.x += origin;
  for (auto& s : lay.sheaths)
    for (auto& h : s.hooks) h.tip += origin;
  return lay;
}

// ---- compilation ------------------------------------------------------------

struct CompileOptions {
  /// Shrunk hook and insulation constants for exhaustive tests. The forcing
  /// margins no longer hold in this mode.
  bool toy = false;
};

enum class RowKind : std::uint8_t { Insulation, Variables, TopSheath, Choice, BottomSheath };

inline std::string_view row_kind_name(RowKind k) {
  switch (k) {
    case RowKind::Insulation: return "insulation";
    case RowKind::Variables: return "variables";
    case RowKind::TopSheath: return "top-sheath";
    case RowKind::Choice: return "choice";
    case RowKind::BottomSheath: return "bottom-sheath";
  }
  return "?";
}

/// One horizontal row of the construction on the doubled grid. Every row runs
/// from (0, y) to (2 * width, y).
struct RowPlan {
  RowKind kind = RowKind::Insulation;
  std::int64_t level = 0;
  std::int64_t y = 0;
  InsulationSpec insulation;
  bool var_below = false;                                        ///< insulation faces the variable row below it
  std::vector<std::pair<std::size_t, std::size_t>> tab_sources;  ///< (variable index, occurrence slot) per tab
  std::vector<std::size_t> clause_ids;                           ///< clause rows: layout clauses left to right
  std::vector<HookSpec> hooks;                                   ///< sheath rows: all hooks in start order
  std::int64_t reach = 0;                                        ///< sheath rows: tip depth G in layout units
};

/// Everything a folding of the compiled chain is chosen from.
struct WitnessState {
  std::vector<bool> var_true;            ///< per variable
  std::vector<std::size_t> choice;       ///< per layout clause: chosen literal slot
  std::vector<std::vector<bool>> tab_up; ///< per row; insulation rows only
};

struct VariableAnchor {
  std::int32_t var = 0;
  std::int64_t level = 0;
  std::int64_t x = 0;  ///< layout units
  std::size_t turn_lo = 0, turn_hi = 0;
  std::string true_turns, false_turns;
};

struct ClauseAnchor {
  std::size_t clause = 0;
  std::int64_t level = 0;
  std::int64_t x = 0;
  std::array<ClauseConnection, 3> connections{};
  std::array<std::int64_t, 3> tips{};  ///< layout column of each literal's tab hook tip
};

struct Provenance {
  std::size_t first_segment = 0;
  std::string fragment;
};

/// Symbol table of a compiled instance.
struct Blueprint {
  int version = 1;
  std::vector<VariableAnchor> variables;
  std::vector<ClauseAnchor> clauses;
  std::vector<Provenance> provenance;  ///< fragment of every segment from first_segment to the next entry
};

/// A compiled chain, kept at segment level: production instances have
/// billions of unit edges.
struct ReductionArtifact {
  FrameVariant variant = FrameVariant::Closed;
  CompileOptions options;
  LinkedLayout layout;
  std::int64_t l_min = 0, margin = 0;
  std::vector<RowPlan> rows;
  std::int64_t inner_length = 0;  ///< L: length of the scaled inner chain
  std::int64_t side = 0;          ///< square variant: s = 10L + 1
  Box inner_box;                  ///< scaled inner chain, before any square translation
  SegmentDecomposition segments;
  Blueprint blueprint;

  Topology topology() const { return variant == FrameVariant::Closed ? Topology::Closed : Topology::Open; }
  std::int64_t total_length() const { return segments.total_length(); }
  std::size_t corner_count() const {
    return topology() == Topology::Open ? segments.lengths.size() - 1 : segments.lengths.size();
  }
  std::size_t h_count() const { return variant == FrameVariant::Hp ? 2 : 0; }

  /// Unit-edge chain; refuses instances above `max_edges`.
  FixedAngleChain chain(std::int64_t max_edges = 50'000'000) const {
    if (total_length() > max_edges) throw ChainError("artifact too large to expand into unit edges");
    std::optional<std::vector<Color>> colors;
    if (variant == FrameVariant::Hp) {
      colors.emplace(static_cast<std::size_t>(total_length() + 1), Color::P);
      colors->front() = Color::H;
      colors->back() = Color::H;
    }
    return chain_from_segments(segments, std::move(colors));
  }
};

namespace reduction_detail {

struct Piece {
  std::string label;
  std::vector<Point> pts;
};
using Pieces = std::vector<Piece>;

inline std::vector<Point> doubled(const std::vector<Point>& p, std::int64_t dx, std::int64_t y0) {
  std::vector<Point> out;
  out.reserve(p.size());
  for (const auto& q : p) out.push_back({2 * (q.x + dx), y0 + 2 * q.y});
  return out;
}

inline Pieces reversed_pieces(Pieces ps) {
  std::reverse(ps.begin(), ps.end());
  for (auto& p : ps) std::reverse(p.pts.begin(), p.pts.end());
  return ps;
}

inline void transform(Pieces& ps, std::int64_t k, Point d) {
  for (auto& p : ps)
    for (auto& q : p.pts) q = q * k + d;
}

struct Assembled {
  std::vector<Point> corners;
  std::vector<std::pair<std::size_t, std::string>> marks;  ///< (corner index, label)
};

inline Assembled concatenate(const Pieces& ps) {
  PathBuilder b(ps.front().pts.front());
  Assembled out;
  for (const auto& p : ps) {
    out.marks.emplace_back(b.points().size() - 1, p.label);
    b.to(p.pts.front());
    b.append(p.pts);
  }
  out.corners = b.take();
  return out;
}

/// Turns at the corners of an open corner path.
inline std::string turn_string(const std::vector<Point>& c) { return to_string(encode_path(c).turns); }

}  // namespace reduction_detail

inline bool occurrence_true(const VariableOccurrence& o, bool var_true) { return o.positive == var_true; }

/// Tab orientation that points every tab toward its variable exactly when
/// the literal there is true.
inline std::vector<std::vector<bool>> derived_tabs(const ReductionArtifact& a, const std::vector<bool>& var_true) {
  std::vector<std::vector<bool>> out(a.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    const auto& row = a.rows[r];
    for (const auto& [vi, slot] : row.tab_sources) {
      const bool lit = occurrence_true(a.layout.variables[vi].occurrences[slot], var_true[vi]);
      out[r].push_back(row.var_below ? !lit : lit);
    }
  }
  return out;
}

namespace reduction_detail {

/// Row content left to right on the doubled grid.
inline Pieces row_pieces(const ReductionArtifact& a, std::size_t r, const WitnessState& st) {
  const auto& row = a.rows[r];
  const auto& lay = a.layout;
  const std::int64_t W = lay.width();
  Pieces out;
  const std::string row_label = "row" + std::to_string(r) + ":" + std::string(row_kind_name(row.kind));
  out.push_back({row_label, {{0, row.y}}});
  switch (row.kind) {
    case RowKind::Insulation: {
      std::vector<bool> grille(row.insulation.tabs.size() + 1, true);
      out.push_back({row_label, translated(insulation_path(row.insulation, grille, st.tab_up.at(r)), {0, row.y})});
      break;
    }
    case RowKind::Variables: {
      std::vector<std::size_t> vars;
      for (std::size_t v = 0; v < lay.variables.size(); ++v)
        if (lay.variables[v].level == row.level) vars.push_back(v);
      std::sort(vars.begin(), vars.end(), [&](auto x, auto y) { return lay.variables[x].x < lay.variables[y].x; });
      for (auto v : vars) {
        const auto& var = lay.variables[v];
        auto path = variable_path(var.occurrences);
        if (!st.var_true.at(v)) path = mirrored_y(path);
        out.push_back({"var" + std::to_string(var.var), doubled(path, var.x, row.y)});
      }
      break;
    }
    case RowKind::TopSheath:
    case RowKind::BottomSheath:
    case RowKind::Choice: {
      const bool top = row.kind == RowKind::TopSheath;
      const std::int64_t yc = row.kind == RowKind::Choice ? row.y : top ? row.y - 2 : row.y + 2;
      std::size_t next_hook = 0;
      for (auto ci : row.clause_ids) {
        const auto& lc = lay.clauses[ci];
        const auto& chosen = lc.connections[st.choice.at(ci)];
        const std::string label = "clause" + std::to_string(lc.clause + 1) + ":" + std::string(row_kind_name(row.kind));
        if (row.kind == RowKind::Choice) {
          out.push_back({label, doubled(clause_choice_path(chosen.shift, !chosen.above), lc.x, yc)});
          continue;
        }
        std::vector<std::int64_t> shifts;
        for (const auto& k : lc.connections)
          if (k.above == top) shifts.push_back(k.shift);
        std::sort(shifts.begin(), shifts.end());
        std::vector<HookSpec> hooks(row.hooks.begin() + static_cast<std::ptrdiff_t>(next_hook),
                                    row.hooks.begin() + static_cast<std::ptrdiff_t>(next_hook + shifts.size() + 2));
        next_hook += shifts.size() + 2;
        std::optional<std::int64_t> ext;
        if (chosen.above == top) ext = chosen.shift;
        auto path = sheath_path(shifts, hooks, ext);
        if (top) path = mirrored_y(path);
        out.push_back({label, doubled(path, lc.x, yc)});
      }
      break;
    }
  }
  out.push_back({row_label, {{2 * W, row.y}}});
  return out;
}

/// Joins the rows into one path from (xR, yb) to (xR - 1, yb): odd rows on
/// the way down, even rows on the way back, each row entered from the right.
/// Row r rises on column xR - r + 1, leaves left along column xL + r - 1 and
/// returns through a corridor below every row.
struct SpiralFrame {
  std::int64_t x0 = 0, x1 = 0, min_y = 0, max_y = 0;
  std::vector<std::int64_t> y;  ///< row axes, strictly decreasing

  std::int64_t rows() const { return static_cast<std::int64_t>(y.size()); }
  std::int64_t right() const { return x1 + rows() + 3; }
  std::int64_t left() const { return x0 - rows() - 1; }
  std::int64_t bottom() const { return min_y - rows() - 2; }
  std::int64_t e(std::int64_t r) const { return right() - (r - 1); }
  std::int64_t lcol(std::int64_t r) const { return left() + r - 1; }
  std::int64_t yb(std::int64_t r) const { return r <= 2 ? bottom() : bottom() + r - 2; }
  std::int64_t ye(std::int64_t r) const { return y[static_cast<std::size_t>(r - 1)]; }
  Box box() const { return {{left(), bottom()}, {right(), max_y}}; }
};

inline Pieces spiral_pieces(const SpiralFrame& f, const std::vector<Pieces>& rows) {
  const std::int64_t T = f.rows();
  if (T < 2) throw ChainError("spiral needs at least two rows");
  for (std::int64_t r = 2; r <= T; ++r)
    if (f.ye(r) >= f.ye(r - 1)) throw ChainError("spiral rows must descend strictly");
  auto piece = [&](std::int64_t r) {
    Pieces ps;
    std::vector<Point> rise{{f.e(r), f.yb(r)}};
    const std::int64_t top = r == 1 ? f.ye(1) : f.ye(r - 1) - 1;
    rise.push_back({f.e(r), top});
    if (top != f.ye(r)) {
      rise.push_back({f.e(r) - 1, top});
      rise.push_back({f.e(r) - 1, f.ye(r)});
    }
    rise.push_back({f.x1, f.ye(r)});
    ps.push_back({"spiral", rise});
    for (auto& p : reversed_pieces(rows[static_cast<std::size_t>(r - 1)])) ps.push_back(p);
    ps.push_back({"spiral",
                  {{f.x0, f.ye(r)}, {f.lcol(r), f.ye(r)}, {f.lcol(r), f.yb(r + 2)}, {f.e(r + 2), f.yb(r + 2)}}});
    return ps;
  };
  Pieces out;
  std::int64_t last_odd = 1;
  for (std::int64_t r = 1; r <= T; r += 2) {
    for (auto& p : piece(r)) out.push_back(p);
    last_odd = r;
  }
  const Point odd_end{f.e(last_odd + 2), f.yb(last_odd + 2)};
  const Point mid{f.e(T + 1), f.yb(T + 2)};
  const Point even_end = odd_end == Point{f.e(T + 1), f.yb(T + 1)} ? Point{f.e(T + 2), f.yb(T + 2)}
                                                                    : Point{f.e(T + 1), f.yb(T + 1)};
  out.push_back({"spiral", {odd_end, mid, even_end}});
  const std::int64_t last_even = (T % 2 == 0) ? T : T - 1;
  for (std::int64_t r = last_even; r >= 2; r -= 2)
    for (auto& p : reversed_pieces(piece(r))) out.push_back(p);
  return out;
}

inline SpiralFrame spiral_frame(const ReductionArtifact& a) {
  SpiralFrame f;
  f.x0 = 0;
  f.x1 = 2 * a.layout.width();
  for (const auto& r : a.rows) f.y.push_back(r.y);
  const auto& first = a.rows.front().insulation;
  const auto& last = a.rows.back().insulation;
  f.max_y = a.rows.front().y + 2 * first.h + 5;
  f.min_y = a.rows.back().y - 2 * last.h - 5;
  return f;
}

/// Inner chain from entry to exit, scaled by 5 (translated for the square frame).
inline Pieces inner_pieces(const ReductionArtifact& a, const WitnessState& st, Point offset) {
  std::vector<Pieces> rows;
  for (std::size_t r = 0; r < a.rows.size(); ++r) rows.push_back(row_pieces(a, r, st));
  auto ps = spiral_pieces(spiral_frame(a), rows);
  transform(ps, 5, offset);
  return ps;
}

/// Full corner path of the chain in the given state. Closed chains start at
/// the first frame corner after the exit and do not repeat it at the end.
inline Assembled assemble(const ReductionArtifact& a, const WitnessState& st) {
  const auto plan = plan_frame(a.variant, a.inner_box, a.inner_length);
  auto inner = inner_pieces(a, st, plan.offset);
  Pieces all;
  if (a.variant == FrameVariant::Closed) {
    all.push_back({"frame", std::vector<Point>(plan.tail.begin() + 1, plan.tail.end())});
    for (auto& p : inner) all.push_back(p);
    all.push_back({"frame", {plan.tail.front(), plan.tail[1]}});
    auto out = concatenate(all);
    if (out.corners.back() != out.corners.front()) throw ChainError("closed assembly does not return to its start");
    out.corners.pop_back();
    return out;
  }
  all.push_back({"frame", plan.head});
  for (auto& p : inner) all.push_back(p);
  all.push_back({"frame", plan.tail});
  return concatenate(all);
}

inline PathEncoding encode_assembled(const ReductionArtifact& a, const Assembled& as) {
  return a.variant == FrameVariant::Closed ? encode_cycle(as.corners) : encode_path(as.corners);
}

inline std::int64_t path_length(const std::vector<Point>& c) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) s += l1_distance(c[i], c[i + 1]);
  return s;
}

inline std::int64_t vertical_length(const std::vector<Point>& c) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i].x == c[i + 1].x) s += std::llabs(c[i + 1].y - c[i].y);
  return s;
}

}  // namespace reduction_detail

/// State in which every variable takes its assigned value, every clause picks
/// its first true literal and every tab points toward a true literal.
/// Returns the index of an unsatisfied layout clause instead when there is one.
inline std::variant<WitnessState, std::size_t> witness_state(const ReductionArtifact& a, const Assignment& full) {
  WitnessState st;
  for (const auto& v : a.layout.variables) st.var_true.push_back(full.at(v.var));
  for (std::size_t ci = 0; ci < a.layout.clauses.size(); ++ci) {
    const auto& lc = a.layout.clauses[ci];
    std::optional<std::size_t> pick;
    for (std::size_t k = 0; k < 3 && !pick; ++k)
      if (literal_value(lc.literals[k], full)) pick = k;
    if (!pick) return ci;
    st.choice.push_back(*pick);
  }
  st.tab_up = derived_tabs(a, st.var_true);
  return st;
}

namespace reduction_detail {

inline void build_rows(ReductionArtifact& a) {
  const auto& lay = a.layout;
  const std::int64_t W = lay.width();
  auto& rows = a.rows;
  rows.push_back({RowKind::Insulation, 0});
  for (std::int64_t level = 1; level <= lay.levels; ++level) {
    if (lay.is_clause_level(level)) {
      for (auto k : {RowKind::TopSheath, RowKind::Choice, RowKind::BottomSheath}) {
        RowPlan rp{k, level};
        for (std::size_t ci = 0; ci < lay.clauses.size(); ++ci)
          if (lay.clauses[ci].level == level) rp.clause_ids.push_back(ci);
        std::sort(rp.clause_ids.begin(), rp.clause_ids.end(),
                  [&](auto x, auto y) { return lay.clauses[x].x < lay.clauses[y].x; });
        rows.push_back(rp);
      }
    } else {
      rows.push_back({RowKind::Variables, level});
    }
    rows.push_back({RowKind::Insulation, level});
  }
  // sheath hooks
  HookStack stack{a.l_min, a.margin, W};
  for (auto& rp : rows) {
    if (rp.kind != RowKind::TopSheath && rp.kind != RowKind::BottomSheath) continue;
    const bool top = rp.kind == RowKind::TopSheath;
    const SheathRow* sr = nullptr;
    for (const auto& s : lay.sheaths)
      if (s.level == rp.level && s.top == top) sr = &s;
    std::vector<std::int64_t> starts, tips;
    std::vector<HookRole> roles;
    if (sr)
      for (const auto& h : sr->hooks) {
        starts.push_back(h.start);
        tips.push_back(h.tip);
        roles.push_back(h.role);
      }
    rp.hooks = stack.build(starts, tips, top, roles);
    for (const auto& h : rp.hooks) check_hook(h);
    rp.reach = stack.reach(std::max<std::size_t>(starts.size(), 1));
  }
  // insulation tabs
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& rp = rows[r];
    if (rp.kind != RowKind::Insulation) continue;
    rp.insulation.width = W;
    const RowPlan* var_row = nullptr;
    if (r + 1 < rows.size() && rows[r + 1].kind == RowKind::Variables) {
      var_row = &rows[r + 1];
      rp.var_below = true;
    } else if (r > 0 && rows[r - 1].kind == RowKind::Variables) {
      var_row = &rows[r - 1];
    }
    if (!var_row) continue;
    std::vector<std::pair<std::int64_t, std::pair<std::size_t, std::size_t>>> tabs;
    for (std::size_t v = 0; v < lay.variables.size(); ++v) {
      const auto& var = lay.variables[v];
      if (var.level != var_row->level) continue;
      for (std::size_t i = 0; i < var.occurrences.size(); ++i) {
        const auto& o = var.occurrences[i];
        if (o.null || o.above != rp.var_below) continue;
        tabs.push_back({var.x + 10 + 3 * static_cast<std::int64_t>(i), {v, i}});
      }
    }
    std::sort(tabs.begin(), tabs.end());
    for (const auto& [col, src] : tabs) {
      rp.insulation.tabs.push_back(col);
      rp.tab_sources.push_back(src);
    }
  }
}

/// Insulation half-heights from the adjacent rows, then row axes top down.
inline void place_rows(ReductionArtifact& a) {
  auto& rows = a.rows;
  WitnessState st;
  st.var_true.assign(a.layout.variables.size(), true);
  st.choice.assign(a.layout.clauses.size(), 0);
  st.tab_up = derived_tabs(a, st.var_true);
  auto vertical = [&](std::size_t r) {
    std::int64_t s = 0;
    for (const auto& p : row_pieces(a, r, st)) s += vertical_length(p.pts);
    return s;
  };
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].kind != RowKind::Insulation) continue;
    std::int64_t h = 1;
    if (!a.options.toy) {
      h += r > 0 ? vertical(r - 1) : 0;
      h += r + 1 < rows.size() ? vertical(r + 1) : 0;
    }
    rows[r].insulation.h = h;
    check_insulation(rows[r].insulation);
  }
  std::int64_t y = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& rp = rows[r];
    if (r == 0) {
      rp.y = 0;
    } else {
      const auto& prev = rows[r - 1];
      switch (rp.kind) {
        case RowKind::Variables: y = prev.y - 2 * prev.insulation.h - 8; break;
        case RowKind::TopSheath: y = prev.y - 2 * prev.insulation.h - 2 - 2 * rp.reach; break;
        case RowKind::Choice:
        case RowKind::BottomSheath: y = prev.y - 2; break;
        case RowKind::Insulation:
          y = prev.kind == RowKind::Variables ? prev.y - 8 - 2 * rp.insulation.h
                                              : prev.y - 2 * prev.reach - 2 - 2 * rp.insulation.h;
          break;
      }
      rp.y = y;
    }
  }
}

}  // namespace reduction_detail

/// Lays out rows, joins them with the spiral and wraps the frame.
inline ReductionArtifact compile(const LinkedLayout& layout, FrameVariant variant, CompileOptions options = {}) {
  namespace rd = reduction_detail;
  ReductionArtifact a;
  a.variant = variant;
  a.options = options;
  a.layout = layout;
  a.l_min = options.toy ? 2 : l_min_for(layout.formula.clauses.size());
  a.margin = options.toy ? 2 : 50;
  rd::build_rows(a);
  rd::place_rows(a);

  WitnessState st;
  st.var_true.assign(layout.variables.size(), true);
  st.choice.assign(layout.clauses.size(), 0);
  st.tab_up = derived_tabs(a, st.var_true);

  const auto frame = rd::spiral_frame(a);
  a.inner_box = {frame.box().min * 5, frame.box().max * 5};
  a.inner_length = rd::path_length(rd::concatenate(rd::inner_pieces(a, st, {0, 0})).corners);
  if (variant == FrameVariant::Square) a.side = 10 * a.inner_length + 1;

  const auto as = rd::assemble(a, st);
  const auto enc = rd::encode_assembled(a, as);
  a.segments = enc.segments;

  // provenance: segment i belongs to the last mark at or before its start corner
  for (const auto& [idx, label] : as.marks)
    if (a.blueprint.provenance.empty() || a.blueprint.provenance.back().fragment != label) {
      if (!a.blueprint.provenance.empty() && a.blueprint.provenance.back().first_segment == idx)
        a.blueprint.provenance.back().fragment = label;
      else
        a.blueprint.provenance.push_back({idx, label});
    }

  // variable anchors: turn window that differs between the two foldings
  const auto base = to_string(enc.turns);
  for (std::size_t v = 0; v < layout.variables.size(); ++v) {
    auto flipped_state = st;
    flipped_state.var_true[v] = false;
    const auto other = rd::encode_assembled(a, rd::assemble(a, flipped_state));
    if (other.segments.lengths != a.segments.lengths) throw ChainError("variable folding changes segment lengths");
    const auto ft = to_string(other.turns);
    std::size_t lo = 0, hi = base.size();
    while (lo < base.size() && base[lo] == ft[lo]) ++lo;
    while (hi > lo && base[hi - 1] == ft[hi - 1]) --hi;
    if (lo >= hi) throw ChainError("variable foldings coincide");
    const auto& var = layout.variables[v];
    a.blueprint.variables.push_back({var.var, var.level, var.x, lo, hi, base.substr(lo, hi - lo), ft.substr(lo, hi - lo)});
  }
  for (const auto& lc : layout.clauses) {
    ClauseAnchor ca{lc.clause, lc.level, lc.x, lc.connections, {}};
    for (const auto& s : layout.sheaths)
      for (const auto& h : s.hooks)
        if (h.role == HookRole::Tab && &layout.clauses[h.clause] == &lc) ca.tips[h.literal] = h.tip;
    a.blueprint.clauses.push_back(ca);
  }
  return a;
}

/// Convenience: normalize then compile.
inline ReductionArtifact reduce(const CnfFormula& f, const LeveledDrawing& d, FrameVariant variant,
                                CompileOptions options = {}) {
  return compile(normalize_to_adjacent_rows(f, d), variant, options);
}

// ---- witnesses and verification ---------------------------------------------

struct WitnessResult {
  std::optional<TurnSequence> turns;
  std::optional<std::size_t> unsatisfied_clause;  ///< index into the compiled formula
  std::string message;

  bool ok() const { return turns.has_value(); }
};

/// Folding of the compiled chain that realizes a satisfying assignment.
inline WitnessResult make_witness(const ReductionArtifact& a, const Assignment& assignment) {
  namespace rd = reduction_detail;
  const auto full = extend_assignment(a.layout, assignment);
  auto st = witness_state(a, full);
  if (std::holds_alternative<std::size_t>(st)) {
    const std::size_t c = a.layout.clauses[std::get<std::size_t>(st)].clause;
    WitnessResult r;
    r.unsatisfied_clause = c;
    r.message = c < a.layout.original_clauses ? "clause " + std::to_string(c + 1) + " is not satisfied"
                                              : "copy clause " + std::to_string(c + 1) + " is not satisfied";
    return r;
  }
  const auto enc = rd::encode_assembled(a, rd::assemble(a, std::get<WitnessState>(st)));
  if (enc.segments.lengths != a.segments.lengths) throw ChainError("witness does not match the compiled segments");
  return {enc.turns, std::nullopt, "ok"};
}

/// Corner polyline of a folding, pose fixed at the origin heading +x.
inline std::vector<Point> trace_artifact(const ReductionArtifact& a, const TurnSequence& turns) {
  return trace(a.segments, turns, Pose{{0, 0}, Heading::PosX});
}

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::optional<Assignment> assignment;

  bool ok() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok; });
  }
  const CheckResult* find(std::string_view n) const {
    for (const auto& c : checks)
      if (c.name == n) return &c;
    return nullptr;
  }
};

/// Variable values read off the variable gadgets' turns. Does not check the
/// embedding.
inline Assignment read_assignment(const ReductionArtifact& a, const TurnSequence& turns) {
  const auto s = to_string(turns);
  Assignment out;
  for (const auto& v : a.blueprint.variables) {
    if (v.turn_hi > s.size()) throw ChainError("turn sequence too short");
    const auto w = s.substr(v.turn_lo, v.turn_hi - v.turn_lo);
    if (w == v.true_turns) out[v.var] = true;
    else if (w == v.false_turns) out[v.var] = false;
    else throw ChainError("variable " + std::to_string(v.var) + " is folded in neither intended way");
  }
  return out;
}

namespace reduction_detail {

inline std::vector<CheckResult> geometry_checks(const ReductionArtifact& a, const TurnSequence& turns) {
  std::vector<CheckResult> out;
  const bool angles = turns.size() == a.corner_count();
  out.push_back({"angles", angles, std::to_string(turns.size()) + " turns for " + std::to_string(a.corner_count()) + " corners"});
  if (!angles) return out;
  const auto c = trace_artifact(a, turns);
  const bool closed = a.variant == FrameVariant::Closed;
  out.push_back({"noncrossing", polyline_noncrossing(c, closed), ""});
  switch (a.variant) {
    case FrameVariant::Closed: out.push_back({"closure", polyline_closes(c, turns), ""}); break;
    case FrameVariant::Hp: {
      const bool contact = l1_distance(c.front(), c.back()) == 1 && a.total_length() > 1;
      out.push_back({"contact", contact, contact ? "1 H-H contact" : "0 H-H contacts"});
      break;
    }
    case FrameVariant::Square: {
      Box b{c.front(), c.front()};
      for (const auto& p : c) {
        b.min = {std::min(b.min.x, p.x), std::min(b.min.y, p.y)};
        b.max = {std::max(b.max.x, p.x), std::max(b.max.y, p.y)};
      }
      const bool fits = b.width() <= a.side && b.height() <= a.side;
      out.push_back({"square", fits, std::to_string(b.width()) + "x" + std::to_string(b.height()) + " in side " +
                                         std::to_string(a.side)});
      break;
    }
  }
  return out;
}

}  // namespace reduction_detail

/// Original-variable assignment encoded by a valid folding.
inline Assignment extract_assignment(const ReductionArtifact& a, const TurnSequence& turns) {
  for (const auto& c : reduction_detail::geometry_checks(a, turns))
    if (!c.ok) throw ChainError("folding fails the " + c.name + " check");
  const auto full = read_assignment(a, turns);
  if (!satisfies(a.layout.formula, full)) throw ChainError("extracted assignment does not satisfy the formula");
  return restrict_assignment(a.layout, full);
}

inline VerifyReport verify_artifact(const ReductionArtifact& a, const TurnSequence& turns) {
  VerifyReport r;
  r.checks = reduction_detail::geometry_checks(a, turns);
  try {
    const auto full = read_assignment(a, turns);
    const auto bad = first_unsatisfied(a.layout.formula, full);
    r.checks.push_back({"assignment", !bad, bad ? "clause " + std::to_string(*bad + 1) + " unsatisfied" : ""});
    r.assignment = restrict_assignment(a.layout, full);
  } catch (const ChainError& e) {
    r.checks.push_back({"assignment", false, e.what()});
  }
  return r;
}

// ---- structural audits ------------------------------------------------------

/// Documented size constant: total length <= kSizeConstant * (n + m)^3 with n,
/// m counted after duplication. Holds for every frame variant.
inline constexpr std::int64_t kSizeConstant = 200'000'000;

inline std::int64_t size_bound(const CnfFormula& f) {
  const std::int64_t k = f.variables + static_cast<std::int64_t>(f.clauses.size());
  return kSizeConstant * k * k * k;
}

/// Residues mod 5 of the segment lengths on each axis, other than 0.
inline std::pair<std::multiset<std::int64_t>, std::multiset<std::int64_t>> frame_residues(const ReductionArtifact& a,
                                                                                           const TurnSequence& turns) {
  const auto c = trace_artifact(a, turns);
  std::multiset<std::int64_t> v, h;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const auto r = l1_distance(c[i], c[i + 1]) % 5;
    if (r != 0) (c[i].x == c[i + 1].x ? v : h).insert(r);
  }
  return {v, h};
}

inline std::vector<CheckResult> audit_artifact(const ReductionArtifact& a) {
  std::vector<CheckResult> out;
  const auto& lay = a.layout;
  // any folding shows the same axis split of segments: use the all-true one
  WitnessState st;
  st.var_true.assign(lay.variables.size(), true);
  st.choice.assign(lay.clauses.size(), 0);
  st.tab_up = derived_tabs(a, st.var_true);
  const auto turns =
      reduction_detail::encode_assembled(a, reduction_detail::assemble(a, st)).turns;
  if (a.variant == FrameVariant::Closed) {
    const auto [v, h] = frame_residues(a, turns);
    const std::multiset<std::int64_t> want{1, 1, 2};
    out.push_back({"frame-residues", v == want && h == want, ""});
  }
  const std::int64_t lmin = a.options.toy ? 2 : l_min_for(lay.formula.clauses.size());
  bool hooks_ok = a.l_min == lmin;
  for (const auto& r : a.rows)
    for (const auto& h : r.hooks) {
      try {
        check_hook(h);
      } catch (const ChainError&) {
        hooks_ok = false;
      }
      hooks_ok = hooks_ok && h.l_min == lmin;
    }
  out.push_back({"l-min", hooks_ok, "l_min = " + std::to_string(lmin)});
  if (a.variant == FrameVariant::Hp) {
    const auto chain_h = a.h_count();
    out.push_back({"two-h", chain_h == 2, std::to_string(chain_h) + " H vertices"});
  }
  const std::int64_t W = lay.width(), Q = lay.quarter;
  bool quarters = true;
  for (const auto& c : lay.clauses) quarters = quarters && c.x - 9 >= 0 && c.x + 10 <= Q;
  for (const auto& v : lay.variables)
    quarters = quarters && v.x >= 3 * Q && v.x + variable_width(v.occurrences.size()) <= W;
  for (const auto& s : lay.sheaths)
    for (const auto& h : s.hooks) quarters = quarters && h.tip >= 3 * Q && h.tip + 1 <= W;
  out.push_back({"quarters", quarters, ""});
  if (a.variant == FrameVariant::Square) {
    out.push_back({"square-side", a.side == 10 * a.inner_length + 1, "s = " + std::to_string(a.side)});
    out.push_back({"square-length", a.total_length() <= 48 * a.inner_length,
                   std::to_string(a.total_length()) + " <= 48 * " + std::to_string(a.inner_length)});
  }
  if (!a.options.toy)
    out.push_back({"size-bound", a.total_length() <= size_bound(lay.formula),
                   std::to_string(a.total_length()) + " <= " + std::to_string(size_bound(lay.formula))});
  return out;
}

}  // namespace chainfold
