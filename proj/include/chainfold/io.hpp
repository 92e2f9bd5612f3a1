#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chainfold/core_model.hpp"
#include "chainfold/fold_engine.hpp"
#include "chainfold/gadgets.hpp"
#include "chainfold/reduction.hpp"

namespace chainfold {

/// Malformed input, located by 1-based line and column.
class ParseError : public ChainError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : ChainError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

namespace io_detail {

struct Token {
  std::string_view text;
  std::size_t line, column;
};

/// Whitespace-separated tokens of one line; `#` starts a comment.
inline std::vector<Token> tokens(std::string_view line, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    out.push_back({line.substr(i, j - i), lineno, i + 1});
    i = j;
  }
  return out;
}

/// Non-empty lines as token lists.
inline std::vector<std::vector<Token>> lines(std::string_view text) {
  std::vector<std::vector<Token>> out;
  std::size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++lineno;
    auto t = tokens(line, lineno);
    if (!t.empty()) out.push_back(std::move(t));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

template <class T>
T number(const Token& t) {
  T v{};
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size())
    throw ParseError(t.line, t.column, "expected a number, got '" + std::string(t.text) + "'");
  return v;
}

inline double real(const Token& t) {
  try {
    std::size_t used = 0;
    const std::string s(t.text);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError(t.line, t.column, "expected a number, got '" + std::string(t.text) + "'");
  }
}

inline std::string real_text(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

inline Topology topology(const Token& t) {
  if (t.text == "open") return Topology::Open;
  if (t.text == "closed") return Topology::Closed;
  throw ParseError(t.line, t.column, "expected 'open' or 'closed'");
}

inline void expect_count(const std::vector<Token>& l, std::size_t n, std::string_view what) {
  if (l.size() != n)
    throw ParseError(l.front().line, l.size() > n ? l[n].column : l.back().column + l.back().text.size(),
                     "expected " + std::string(what));
}

}  // namespace io_detail

// ---- chains -----------------------------------------------------------------

/// `open|closed <angles>` with angles over {S, C}, optionally followed by a
/// `colors <HP...>` line with one color per vertex.
inline FixedAngleChain parse_chain(std::string_view text) {
  const auto ls = io_detail::lines(text);
  if (ls.empty()) throw ParseError(1, 1, "empty chain file");
  const auto& l0 = ls[0];
  FixedAngleChain c;
  c.topology = io_detail::topology(l0[0]);
  if (l0.size() > 2) throw ParseError(l0[2].line, l0[2].column, "unexpected token after the angle list");
  if (l0.size() == 2) {
    for (std::size_t i = 0; i < l0[1].text.size(); ++i) {
      const char ch = l0[1].text[i];
      if (ch == 'S') c.angles.push_back(Angle::Straight);
      else if (ch == 'C') c.angles.push_back(Angle::Corner);
      else throw ParseError(l0[1].line, l0[1].column + i, "angle must be S or C");
    }
  }
  if (ls.size() > 1) {
    const auto& l1 = ls[1];
    if (l1[0].text != "colors") throw ParseError(l1[0].line, l1[0].column, "expected 'colors'");
    io_detail::expect_count(l1, 2, "one color string");
    std::vector<Color> cols;
    for (std::size_t i = 0; i < l1[1].text.size(); ++i) {
      const char ch = l1[1].text[i];
      if (ch == 'H') cols.push_back(Color::H);
      else if (ch == 'P') cols.push_back(Color::P);
      else throw ParseError(l1[1].line, l1[1].column + i, "color must be H or P");
    }
    if (cols.size() != c.vertex_count())
      throw ParseError(l1[1].line, l1[1].column, "color count does not match vertex count");
    c.colors = std::move(cols);
  }
  if (ls.size() > 2) throw ParseError(ls[2][0].line, ls[2][0].column, "unexpected line");
  if (c.topology == Topology::Open && c.angles.empty() && l0.size() < 2 && !c.colors) {
    // a single edge: "open" alone
  }
  return c;
}

inline std::string emit_chain(const FixedAngleChain& c) {
  std::string s(topology_name(c.topology));
  if (!c.angles.empty()) {
    s.push_back(' ');
    for (auto a : c.angles) s.push_back(angle_char(a));
  }
  s.push_back('\n');
  if (c.colors) {
    s += "colors ";
    for (auto col : *c.colors) s.push_back(color_char(col));
    s.push_back('\n');
  }
  return s;
}

/// `open|closed l1 l2 ...`
inline SegmentDecomposition parse_segments(std::string_view text) {
  const auto ls = io_detail::lines(text);
  if (ls.empty()) throw ParseError(1, 1, "empty segment file");
  SegmentDecomposition d;
  d.topology = io_detail::topology(ls[0][0]);
  for (std::size_t li = 0; li < ls.size(); ++li)
    for (std::size_t i = li == 0 ? 1 : 0; i < ls[li].size(); ++i) {
      const auto v = io_detail::number<std::int64_t>(ls[li][i]);
      if (v < 1) throw ParseError(ls[li][i].line, ls[li][i].column, "segment length must be at least 1");
      d.lengths.push_back(v);
    }
  if (d.lengths.empty()) throw ParseError(ls[0][0].line, ls[0][0].column + ls[0][0].text.size(), "no segments");
  return d;
}

inline std::string emit_segments(const SegmentDecomposition& d) {
  std::string s(topology_name(d.topology));
  for (auto l : d.lengths) s += " " + std::to_string(l);
  s.push_back('\n');
  return s;
}

/// Header `open|closed`, then one `x y` pair per line.
inline LatticeConfiguration parse_config(std::string_view text) {
  const auto ls = io_detail::lines(text);
  if (ls.empty()) throw ParseError(1, 1, "empty configuration file");
  io_detail::expect_count(ls[0], 1, "a lone topology header");
  LatticeConfiguration cfg;
  cfg.topology = io_detail::topology(ls[0][0]);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    io_detail::expect_count(ls[i], 2, "two coordinates");
    cfg.points.push_back({io_detail::number<std::int64_t>(ls[i][0]), io_detail::number<std::int64_t>(ls[i][1])});
  }
  return cfg;
}

inline std::string emit_config(const LatticeConfiguration& cfg) { return to_string(cfg); }

/// L/R string, possibly wrapped over several lines.
inline TurnSequence parse_turn_file(std::string_view text) {
  TurnSequence t;
  for (const auto& l : io_detail::lines(text))
    for (const auto& tok : l)
      for (std::size_t i = 0; i < tok.text.size(); ++i) {
        const char ch = tok.text[i];
        if (ch == 'L') t.turns.push_back(Turn::Left);
        else if (ch == 'R') t.turns.push_back(Turn::Right);
        else throw ParseError(tok.line, tok.column + i, "turn must be L or R");
      }
  return t;
}

inline std::string emit_turns(const TurnSequence& t) { return to_string(t) + "\n"; }

// ---- formulas, drawings, assignments ------------------------------------------

inline CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool header = false;
  std::size_t declared = 0;
  std::vector<Literal> cur;
  io_detail::Token last{"", 1, 1};
  for (const auto& l : io_detail::lines(text)) {
    if (l[0].text == "c") continue;
    if (l[0].text == "p") {
      if (header) throw ParseError(l[0].line, l[0].column, "second problem line");
      io_detail::expect_count(l, 4, "'p cnf <variables> <clauses>'");
      if (l[1].text != "cnf") throw ParseError(l[1].line, l[1].column, "expected 'cnf'");
      f.variables = io_detail::number<std::int32_t>(l[2]);
      declared = io_detail::number<std::size_t>(l[3]);
      header = true;
      continue;
    }
    if (!header) throw ParseError(l[0].line, l[0].column, "clause before the problem line");
    for (const auto& t : l) {
      last = t;
      const auto v = io_detail::number<Literal>(t);
      if (v == 0) {
        if (cur.empty()) throw ParseError(t.line, t.column, "empty clause");
        f.clauses.push_back(std::move(cur));
        cur.clear();
        continue;
      }
      if (std::abs(v) > f.variables) throw ParseError(t.line, t.column, "literal references an undeclared variable");
      cur.push_back(v);
      if (cur.size() > 3) throw ParseError(t.line, t.column, "clause has more than three literals");
    }
  }
  if (!header) throw ParseError(1, 1, "missing problem line");
  if (!cur.empty()) throw ParseError(last.line, last.column, "clause not terminated by 0");
  if (f.clauses.size() != declared)
    throw ParseError(last.line, last.column, "problem line declares " + std::to_string(declared) + " clauses, found " +
                                                 std::to_string(f.clauses.size()));
  return f;
}

inline std::string emit_dimacs(const CnfFormula& f) {
  std::string s = "p cnf " + std::to_string(f.variables) + " " + std::to_string(f.clauses.size()) + "\n";
  for (const auto& c : f.clauses) {
    for (auto l : c) s += std::to_string(l) + " ";
    s += "0\n";
  }
  return s;
}

/// Sidecar lines `v <id> <row> <x>` and `c <id> <row> <x>`.
inline LeveledDrawing parse_drawing(std::string_view text, const CnfFormula& f) {
  LeveledDrawing d;
  d.variables.assign(static_cast<std::size_t>(f.variables), {});
  d.clauses.assign(f.clauses.size(), {});
  std::vector<bool> seen_v(d.variables.size()), seen_c(d.clauses.size());
  for (const auto& l : io_detail::lines(text)) {
    io_detail::expect_count(l, 4, "'v|c <id> <row> <x>'");
    const bool var = l[0].text == "v";
    if (!var && l[0].text != "c") throw ParseError(l[0].line, l[0].column, "expected 'v' or 'c'");
    const auto id = io_detail::number<std::int64_t>(l[1]);
    const auto& seen = var ? seen_v : seen_c;
    if (id < 1 || static_cast<std::size_t>(id) > seen.size())
      throw ParseError(l[1].line, l[1].column, var ? "unknown variable" : "unknown clause");
    const auto i = static_cast<std::size_t>(id - 1);
    if (seen[i]) throw ParseError(l[1].line, l[1].column, "position given twice");
    (var ? seen_v : seen_c)[i] = true;
    (var ? d.variables : d.clauses)[i] = {io_detail::number<std::int64_t>(l[2]), io_detail::real(l[3])};
  }
  for (std::size_t i = 0; i < seen_v.size(); ++i)
    if (!seen_v[i]) throw ParseError(1, 1, "no position for variable " + std::to_string(i + 1));
  for (std::size_t i = 0; i < seen_c.size(); ++i)
    if (!seen_c[i]) throw ParseError(1, 1, "no position for clause " + std::to_string(i + 1));
  return d;
}

inline std::string emit_drawing(const LeveledDrawing& d) {
  std::string s;
  for (std::size_t i = 0; i < d.variables.size(); ++i)
    s += "v " + std::to_string(i + 1) + " " + std::to_string(d.variables[i].row) + " " +
         io_detail::real_text(d.variables[i].x) + "\n";
  for (std::size_t i = 0; i < d.clauses.size(); ++i)
    s += "c " + std::to_string(i + 1) + " " + std::to_string(d.clauses[i].row) + " " +
         io_detail::real_text(d.clauses[i].x) + "\n";
  return s;
}

/// Lines `<var>=0|1`.
inline Assignment parse_assignment(std::string_view text) {
  Assignment a;
  for (const auto& l : io_detail::lines(text))
    for (const auto& t : l) {
      const auto eq = t.text.find('=');
      if (eq == std::string_view::npos) throw ParseError(t.line, t.column, "expected <var>=0|1");
      const io_detail::Token var{t.text.substr(0, eq), t.line, t.column};
      const io_detail::Token val{t.text.substr(eq + 1), t.line, t.column + eq + 1};
      const auto v = io_detail::number<std::int32_t>(var);
      if (v < 1) throw ParseError(var.line, var.column, "variable index must be positive");
      if (val.text != "0" && val.text != "1") throw ParseError(val.line, val.column, "value must be 0 or 1");
      if (!a.emplace(v, val.text == "1").second) throw ParseError(t.line, t.column, "variable assigned twice");
    }
  return a;
}

inline std::string emit_assignment(const Assignment& a) {
  std::string s;
  for (const auto& [v, b] : a) s += std::to_string(v) + "=" + (b ? "1" : "0") + "\n";
  return s;
}

// ---- artifacts ----------------------------------------------------------------

inline constexpr int kArtifactVersion = 1;

namespace io_detail {

using nlohmann::json;

inline json point_json(Point p) { return json::array({p.x, p.y}); }
inline Point point_of(const json& j) { return {j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>()}; }

inline json hook_json(const HookSpec& h) {
  return {{"up", h.up},         {"first", h.first},   {"middle", h.middle}, {"last", h.last},
          {"horizontal", h.horizontal}, {"tab", h.role == HookRole::Tab}, {"l_min", h.l_min},
          {"margin", h.margin}, {"width", h.construction_width}};
}

inline HookSpec hook_of(const json& j) {
  HookSpec h;
  h.up = j.at("up");
  h.first = j.at("first");
  h.middle = j.at("middle");
  h.last = j.at("last");
  h.horizontal = j.at("horizontal");
  h.role = j.at("tab").get<bool>() ? HookRole::Tab : HookRole::Stabilizing;
  h.l_min = j.at("l_min");
  h.margin = j.at("margin");
  h.construction_width = j.at("width");
  return h;
}

inline json connection_json(const ClauseConnection& c) { return {{"above", c.above}, {"shift", c.shift}}; }
inline ClauseConnection connection_of(const json& j) { return {j.at("above").get<bool>(), j.at("shift").get<std::int64_t>()}; }

}  // namespace io_detail

/// Versioned JSON carrying the layout, the row plans, the compiled segments
/// and the blueprint (variable turn windows and per-segment provenance).
inline nlohmann::json artifact_to_json(const ReductionArtifact& a) {
  using nlohmann::json;
  using namespace io_detail;
  const auto& lay = a.layout;
  json j;
  j["version"] = kArtifactVersion;
  j["variant"] = std::string(frame_variant_name(a.variant));
  j["toy"] = a.options.toy;
  j["l_min"] = a.l_min;
  j["margin"] = a.margin;
  j["formula"] = {{"variables", lay.formula.variables}, {"clauses", lay.formula.clauses}};
  j["original_variables"] = lay.original_variables;
  j["original_clauses"] = lay.original_clauses;
  j["copies"] = lay.copies;
  json dv = json::array(), dc = json::array();
  for (const auto& p : lay.drawing.variables) dv.push_back({p.row, p.x});
  for (const auto& p : lay.drawing.clauses) dc.push_back({p.row, p.x});
  j["drawing"] = {{"variables", dv}, {"clauses", dc}};
  j["levels"] = lay.levels;
  j["quarter"] = lay.quarter;
  json clauses = json::array();
  for (const auto& c : lay.clauses) {
    json conns = json::array();
    for (const auto& k : c.connections) conns.push_back(connection_json(k));
    clauses.push_back({{"clause", c.clause}, {"level", c.level}, {"x", c.x}, {"literals", c.literals},
                       {"connections", conns}, {"occurrence", c.occurrence}});
  }
  j["clauses"] = clauses;
  json vars = json::array();
  for (const auto& v : lay.variables) {
    json occ = json::array();
    for (const auto& o : v.occurrences) occ.push_back({o.positive, o.above, o.null});
    vars.push_back({{"var", v.var}, {"level", v.level}, {"x", v.x}, {"occurrences", occ}});
  }
  j["variables"] = vars;
  json sheaths = json::array();
  for (const auto& s : lay.sheaths) {
    json hooks = json::array();
    for (const auto& h : s.hooks)
      hooks.push_back({h.role == HookRole::Tab, h.clause, h.literal, h.start, h.tip});
    sheaths.push_back({{"level", s.level}, {"top", s.top}, {"hooks", hooks}});
  }
  j["sheaths"] = sheaths;
  json rows = json::array();
  for (const auto& r : a.rows) {
    json hooks = json::array();
    for (const auto& h : r.hooks) hooks.push_back(hook_json(h));
    rows.push_back({{"kind", static_cast<int>(r.kind)},
                    {"level", r.level},
                    {"y", r.y},
                    {"h", r.insulation.h},
                    {"width", r.insulation.width},
                    {"tabs", r.insulation.tabs},
                    {"var_below", r.var_below},
                    {"tab_sources", r.tab_sources},
                    {"clause_ids", r.clause_ids},
                    {"hooks", hooks},
                    {"reach", r.reach}});
  }
  j["rows"] = rows;
  j["inner_length"] = a.inner_length;
  j["side"] = a.side;
  j["inner_box"] = {point_json(a.inner_box.min), point_json(a.inner_box.max)};
  j["segments"] = {{"topology", std::string(topology_name(a.segments.topology))}, {"lengths", a.segments.lengths}};
  json bv = json::array(), bc = json::array(), bp = json::array();
  for (const auto& v : a.blueprint.variables)
    bv.push_back({{"var", v.var}, {"level", v.level}, {"x", v.x}, {"turn_lo", v.turn_lo}, {"turn_hi", v.turn_hi},
                  {"true", v.true_turns}, {"false", v.false_turns}});
  for (const auto& c : a.blueprint.clauses) {
    json conns = json::array();
    for (const auto& k : c.connections) conns.push_back(connection_json(k));
    bc.push_back({{"clause", c.clause}, {"level", c.level}, {"x", c.x}, {"connections", conns}, {"tips", c.tips}});
  }
  for (const auto& p : a.blueprint.provenance) bp.push_back({p.first_segment, p.fragment});
  j["blueprint"] = {{"version", a.blueprint.version}, {"variables", bv}, {"clauses", bc}, {"provenance", bp}};
  return j;
}

inline ReductionArtifact artifact_from_json(const nlohmann::json& j) {
  using namespace io_detail;
  try {
    if (j.at("version").get<int>() != kArtifactVersion) throw ChainError("unsupported artifact version");
    ReductionArtifact a;
    const auto variant = j.at("variant").get<std::string>();
    a.variant = variant == "closed" ? FrameVariant::Closed : variant == "hp" ? FrameVariant::Hp : FrameVariant::Square;
    if (variant != "closed" && variant != "hp" && variant != "square") throw ChainError("unknown variant " + variant);
    a.options.toy = j.at("toy");
    a.l_min = j.at("l_min");
    a.margin = j.at("margin");
    auto& lay = a.layout;
    lay.formula.variables = j.at("formula").at("variables");
    lay.formula.clauses = j.at("formula").at("clauses").get<std::vector<std::vector<Literal>>>();
    lay.original_variables = j.at("original_variables");
    lay.original_clauses = j.at("original_clauses");
    lay.copies = j.at("copies").get<std::vector<std::pair<std::int32_t, std::int32_t>>>();
    for (const auto& p : j.at("drawing").at("variables")) lay.drawing.variables.push_back({p.at(0), p.at(1)});
    for (const auto& p : j.at("drawing").at("clauses")) lay.drawing.clauses.push_back({p.at(0), p.at(1)});
    lay.levels = j.at("levels");
    lay.quarter = j.at("quarter");
    for (const auto& c : j.at("clauses")) {
      LayoutClause lc;
      lc.clause = c.at("clause");
      lc.level = c.at("level");
      lc.x = c.at("x");
      lc.literals = c.at("literals").get<std::array<Literal, 3>>();
      for (std::size_t k = 0; k < 3; ++k) lc.connections[k] = connection_of(c.at("connections").at(k));
      lc.occurrence = c.at("occurrence").get<std::array<std::size_t, 3>>();
      lay.clauses.push_back(lc);
    }
    for (const auto& v : j.at("variables")) {
      LayoutVariable lv;
      lv.var = v.at("var");
      lv.level = v.at("level");
      lv.x = v.at("x");
      for (const auto& o : v.at("occurrences")) lv.occurrences.push_back({o.at(0), o.at(1), o.at(2)});
      lay.variables.push_back(lv);
    }
    for (const auto& s : j.at("sheaths")) {
      SheathRow sr{s.at("level"), s.at("top"), {}};
      for (const auto& h : s.at("hooks"))
        sr.hooks.push_back({h.at(0).get<bool>() ? HookRole::Tab : HookRole::Stabilizing, h.at(1), h.at(2), h.at(3), h.at(4)});
      lay.sheaths.push_back(sr);
    }
    for (const auto& r : j.at("rows")) {
      RowPlan rp;
      rp.kind = static_cast<RowKind>(r.at("kind").get<int>());
      rp.level = r.at("level");
      rp.y = r.at("y");
      rp.insulation.h = r.at("h");
      rp.insulation.width = r.at("width");
      rp.insulation.tabs = r.at("tabs").get<std::vector<std::int64_t>>();
      rp.var_below = r.at("var_below");
      rp.tab_sources = r.at("tab_sources").get<std::vector<std::pair<std::size_t, std::size_t>>>();
      rp.clause_ids = r.at("clause_ids").get<std::vector<std::size_t>>();
      for (const auto& h : r.at("hooks")) rp.hooks.push_back(hook_of(h));
      rp.reach = r.at("reach");
      a.rows.push_back(rp);
    }
    a.inner_length = j.at("inner_length");
    a.side = j.at("side");
    a.inner_box = {point_of(j.at("inner_box").at(0)), point_of(j.at("inner_box").at(1))};
    a.segments.topology = j.at("segments").at("topology").get<std::string>() == "closed" ? Topology::Closed : Topology::Open;
    a.segments.lengths = j.at("segments").at("lengths").get<std::vector<std::int64_t>>();
    const auto& b = j.at("blueprint");
    a.blueprint.version = b.at("version");
    for (const auto& v : b.at("variables"))
      a.blueprint.variables.push_back({v.at("var"), v.at("level"), v.at("x"), v.at("turn_lo"), v.at("turn_hi"),
                                       v.at("true"), v.at("false")});
    for (const auto& c : b.at("clauses")) {
      ClauseAnchor ca;
      ca.clause = c.at("clause");
      ca.level = c.at("level");
      ca.x = c.at("x");
      for (std::size_t k = 0; k < 3; ++k) ca.connections[k] = connection_of(c.at("connections").at(k));
      ca.tips = c.at("tips").get<std::array<std::int64_t, 3>>();
      a.blueprint.clauses.push_back(ca);
    }
    for (const auto& p : b.at("provenance")) a.blueprint.provenance.push_back({p.at(0), p.at(1)});
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ChainError(std::string("malformed artifact: ") + e.what());
  }
}

inline std::string emit_artifact(const ReductionArtifact& a) { return artifact_to_json(a).dump() + "\n"; }

inline ReductionArtifact parse_artifact(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ChainError(std::string("artifact is not valid JSON: ") + e.what());
  }
  return artifact_from_json(j);
}

// ---- files --------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChainError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ChainError("cannot write " + path);
  out << text;
}

// ---- SVG ----------------------------------------------------------------------

struct RenderStyle {
  double scale = 20;  ///< pixels per lattice unit
  double stroke = 2;
  double vertex_radius = 3;
  double margin = 1;  ///< lattice units around the drawing
  std::string chain_color = "#1f4e9c";
  std::string h_color = "#d62728";
  std::string p_color = "#1f77b4";
  bool show_vertices = true;
  bool show_labels = false;
  std::string title;
};

inline void check_style(const RenderStyle& s) {
  if (s.scale < 1) throw ChainError("render scale must be at least 1");
}

namespace io_detail {

inline std::string num(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  std::string s(buf, p);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace io_detail

/// Corner polyline as one SVG path, y axis pointing up. Each unit edge of a
/// small chain is drawn as its own stroke when `unit_strokes` is set.
inline std::string render_svg(const std::vector<Point>& corners, bool closed, const RenderStyle& style,
                              const std::vector<std::pair<Point, Color>>& marks = {}, bool unit_strokes = false) {
  using io_detail::num;
  check_style(style);
  if (corners.empty()) throw ChainError("nothing to render");
  const Box b = bounding_box(corners);
  const double m = style.margin;
  const double w = (static_cast<double>(b.width()) + 2 * m) * style.scale;
  const double h = (static_cast<double>(b.height()) + 2 * m) * style.scale;
  auto X = [&](std::int64_t x) { return (static_cast<double>(x - b.min.x) + m) * style.scale; };
  auto Y = [&](std::int64_t y) { return (static_cast<double>(b.max.y - y) + m) * style.scale; };
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
                  "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
  if (!style.title.empty()) s += "<title>" + style.title + "</title>\n";
  const std::string stroke = "stroke=\"" + style.chain_color + "\" stroke-width=\"" + num(style.stroke) +
                             "\" fill=\"none\" stroke-linecap=\"round\"";
  if (unit_strokes) {
    for (std::size_t i = 0; i + 1 < corners.size(); ++i) {
      const Point a = corners[i], c = corners[i + 1];
      const Point d{(c.x > a.x) - (c.x < a.x), (c.y > a.y) - (c.y < a.y)};
      for (Point p = a; p != c; p = p + d)
        s += "<line x1=\"" + num(X(p.x)) + "\" y1=\"" + num(Y(p.y)) + "\" x2=\"" + num(X(p.x + d.x)) + "\" y2=\"" +
             num(Y(p.y + d.y)) + "\" " + stroke + "/>\n";
    }
  } else {
    s += "<path d=\"M" + num(X(corners[0].x)) + " " + num(Y(corners[0].y));
    for (std::size_t i = 1; i < corners.size(); ++i) s += " L" + num(X(corners[i].x)) + " " + num(Y(corners[i].y));
    if (closed) s += " Z";
    s += "\" " + stroke + "/>\n";
  }
  if (style.show_vertices)
    for (const auto& [p, c] : marks)
      s += "<circle cx=\"" + num(X(p.x)) + "\" cy=\"" + num(Y(p.y)) + "\" r=\"" + num(style.vertex_radius) +
           "\" fill=\"" + (c == Color::H ? style.h_color : style.p_color) + "\"/>\n";
  s += "</svg>\n";
  return s;
}

/// Configuration with one stroke per unit edge and colored vertices.
inline std::string render_config(const LatticeConfiguration& cfg, const std::optional<std::vector<Color>>& colors,
                                 const RenderStyle& style) {
  std::vector<std::pair<Point, Color>> marks;
  const std::size_t n = cfg.vertex_count();
  for (std::size_t i = 0; i < n; ++i) marks.push_back({cfg.points[i], colors ? (*colors)[i] : Color::P});
  return render_svg(cfg.points, cfg.topology == Topology::Closed, style, marks, true);
}

}  // namespace chainfold
