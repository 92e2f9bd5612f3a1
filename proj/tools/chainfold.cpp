#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "chainfold/io.hpp"
#include "chainfold/solvers.hpp"

using namespace chainfold;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

int log_level() {
  const char* v = std::getenv("CHAINFOLD_LOG");
  if (!v) return 0;
  const std::string s(v);
  if (s == "debug" || s == "2") return 2;
  if (s == "info" || s == "1") return 1;
  return 0;
}

void log(int level, const std::string& msg) {
  if (level <= log_level()) std::cerr << "[chainfold] " << msg << "\n";
}

struct Common {
  std::uint64_t budget = SearchOptions{}.budget;
  std::uint64_t seed = 1;
  unsigned parallel = 1;
  bool deterministic = false;
  std::string box;
  std::string out;
};

std::optional<Box> parse_box(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto x = s.find('x');
  io_detail::Token w{std::string_view(s).substr(0, x), 1, 1};
  if (x == std::string::npos) throw ParseError(1, 1, "box must be WxH");
  io_detail::Token h{std::string_view(s).substr(x + 1), 1, x + 2};
  const auto bw = io_detail::number<std::int64_t>(w), bh = io_detail::number<std::int64_t>(h);
  if (bw < 0 || bh < 0) throw ParseError(1, 1, "box sides must be non-negative");
  return Box{{0, 0}, {bw, bh}};
}

SearchOptions search_options(const Common& c) {
  SearchOptions o;
  o.budget = c.budget;
  o.parallel = std::max(1u, c.parallel);
  o.deterministic = c.deterministic || o.parallel == 1;
  o.box = parse_box(c.box);
  return o;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") std::cout << text;
  else write_file(c.out, text);
}

FixedAngleChain load_chain(const std::string& path) {
  try {
    return parse_chain(read_file(path));
  } catch (const ParseError& e) {
    throw ChainError(path + ": " + e.what());
  }
}

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path + ": " + std::string(e.what()));
  }
}

int report(const SolveResult& r, const FixedAngleChain& chain, const Common& c, const std::string& none) {
  log(1, "nodes " + std::to_string(r.nodes));
  if (r.status == SolveStatus::BudgetExceeded) {
    std::cout << "budget exceeded after " << r.nodes << " nodes\n";
    return kBudget;
  }
  if (r.status == SolveStatus::Exhausted) {
    std::cout << none << "\n";
    return kNegative;
  }
  std::cout << "found " << to_string(*r.witness) << "\n";
  if (!c.out.empty()) write_file(c.out, emit_config(embed(chain, *r.witness, {})));
  return kOk;
}

FrameVariant variant_of(const std::string& s) {
  if (s == "closed") return FrameVariant::Closed;
  if (s == "hp") return FrameVariant::Hp;
  if (s == "square") return FrameVariant::Square;
  throw ParseError(1, 1, "variant must be closed, hp or square");
}

int gallery(const std::string& dir, const RenderStyle& style) {
  std::filesystem::create_directories(dir);
  std::vector<GadgetFragment> fs;
  fs.push_back(build_insulation({3, 9, {2, 5}}));
  fs.push_back(build_choice());
  fs.push_back(build_hook({false, 102, 50, 101, 10, HookRole::Stabilizing, 50, 50, 18}));
  fs.push_back(build_hook({true, 102, 50, 101, 3, HookRole::Tab, 50, 50, 0}));
  fs.push_back(build_variable({{true, true}, {false, false}, {true, false}}));
  auto cl = build_clause({{{false, -4}, {false, 0}, {true, 4}}, {}, {}});
  fs.push_back(cl.choice);
  fs.push_back(cl.top);
  fs.push_back(cl.bottom);
  fs.push_back(build_frame(FrameVariant::Closed, Box{{0, 0}, {40, 25}}, 100));
  fs.push_back(build_frame(FrameVariant::Hp, Box{{0, 0}, {40, 25}}, 100));
  fs.push_back(build_frame(FrameVariant::Square, Box{{0, 0}, {40, 25}}, 100));
  std::map<std::string, int> seen;
  std::size_t files = 0;
  for (const auto& f : fs) {
    const int k = seen[f.kind]++;
    const std::string stem = f.kind + (k ? "-" + std::to_string(k) : "");
    for (std::size_t i = 0; i < f.intended.size(); ++i) {
      auto st = style;
      st.title = stem + " " + f.intended[i].name;
      std::string name = f.intended[i].name;
      for (auto& ch : name)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-') ch = '_';
      const auto path = dir + "/" + stem + "-" + name + ".svg";
      write_file(path, render_svg(f.corners(i), f.segments.topology == Topology::Closed, st));
      ++files;
      log(1, "wrote " + path);
    }
  }
  std::cout << "wrote " << files << " svg files to " << dir << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-angle orthogonal chain folding and 3SAT reduction tool"};
  app.require_subcommand(1);
  Common c;
  RenderStyle style;
  auto common = [&](CLI::App* s, bool search) {
    s->add_option("--out", c.out, "Output path (default: stdout)");
    if (!search) return;
    s->add_option("--budget", c.budget, "Search node budget");
    s->add_option("--parallel", c.parallel, "Worker threads");
    s->add_flag("--deterministic", c.deterministic, "Reproducible results under --parallel");
    s->add_option("--seed", c.seed, "Random seed (reserved; searches are exhaustive)");
    s->add_option("--box", c.box, "Bounding box WxH");
  };

  std::string chain_path, cnf_path, lvl_path, artifact_path, assign_path, turns_path, input_path, colors_path, variant = "closed";
  std::int64_t side = 0;
  bool toy = false, count_only = false, segments_only = false;

  auto* flatten = app.add_subcommand("solve-flatten", "Find a noncrossing closed configuration");
  flatten->add_option("chain", chain_path)->required();
  common(flatten, true);

  auto* hp = app.add_subcommand("solve-hp", "Maximize H-H contacts");
  hp->add_option("chain", chain_path)->required();
  common(hp, true);

  auto* pack = app.add_subcommand("solve-pack", "Fit an open chain in a square");
  pack->add_option("chain", chain_path)->required();
  pack->add_option("side", side, "Square side")->required();
  common(pack, true);

  auto* red = app.add_subcommand("reduce", "Compile a planar 3SAT instance into a chain");
  red->add_option("formula", cnf_path, "DIMACS file")->required();
  red->add_option("drawing", lvl_path, "Leveled drawing sidecar")->required();
  red->add_option("--variant", variant)->check(CLI::IsMember({"closed", "hp", "square"}));
  red->add_flag("--toy-parameters", toy, "Shrunk constants; forfeits the forcing guarantees");
  red->add_flag("--segments", segments_only, "Write the segment list instead of the artifact");
  common(red, false);

  auto* wit = app.add_subcommand("witness", "Folding for a satisfying assignment");
  wit->add_option("artifact", artifact_path)->required();
  wit->add_option("assignment", assign_path)->required();
  common(wit, false);

  auto* ver = app.add_subcommand("verify", "Check a folding of a compiled chain");
  ver->add_option("artifact", artifact_path)->required();
  ver->add_option("turns", turns_path)->required();
  common(ver, false);

  auto* ren = app.add_subcommand("render", "Render a configuration or an artifact folding to SVG");
  ren->add_option("input", input_path, "Configuration file or artifact")->required();
  ren->add_option("--turns", turns_path, "Turns of an artifact folding");
  ren->add_option("--chain", colors_path, "Chain file supplying vertex colors");
  ren->add_option("--scale", style.scale, "Pixels per unit");
  common(ren, false);

  auto* en = app.add_subcommand("enumerate", "List every noncrossing folding");
  en->add_option("chain", chain_path)->required();
  en->add_flag("--count-only", count_only);
  common(en, true);

  auto* gal = app.add_subcommand("gallery", "Render each gadget's intended foldings");
  gal->add_option("--scale", style.scale, "Pixels per unit");
  gal->add_option("--out", c.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    log(2, "seed " + std::to_string(c.seed));
    if (*flatten) {
      const auto chain = load_chain(chain_path);
      return report(solve_flatten(chain, search_options(c)), chain, c, "no noncrossing closed configuration");
    }
    if (*hp) {
      const auto chain = load_chain(chain_path);
      const auto r = solve_hp(chain, search_options(c));
      if (r.objective) std::cout << "contacts=" << *r.objective << "\n";
      return report(r, chain, c, "no noncrossing configuration");
    }
    if (*pack) {
      const auto chain = load_chain(chain_path);
      return report(solve_pack(chain, side, search_options(c)), chain, c,
                    "no noncrossing configuration in a " + std::to_string(side) + " square");
    }
    if (*red) {
      const auto f = with_path(cnf_path, [](const std::string& t) { return parse_dimacs(t); });
      const auto d = with_path(lvl_path, [&](const std::string& t) { return parse_drawing(t, f); });
      check_drawing(f, d);
      const auto a = reduce(f, d, variant_of(variant), {toy});
      std::cerr << "variant=" << frame_variant_name(a.variant) << " segments=" << a.segments.lengths.size()
                << " length=" << a.total_length() << " corners=" << a.corner_count() << "\n";
      for (const auto& k : audit_artifact(a))
        if (!k.ok) log(0, "audit " + k.name + " failed: " + k.detail);
      emit(c, segments_only ? emit_segments(a.segments) : emit_artifact(a));
      return kOk;
    }
    if (*wit) {
      const auto a = parse_artifact(read_file(artifact_path));
      const auto m = with_path(assign_path, [](const std::string& t) { return parse_assignment(t); });
      const auto w = make_witness(a, m);
      if (!w.ok()) {
        std::cout << w.message << "\n";
        return kNegative;
      }
      emit(c, emit_turns(*w.turns));
      return kOk;
    }
    if (*ver) {
      const auto a = parse_artifact(read_file(artifact_path));
      const auto t = with_path(turns_path, [](const std::string& s) { return parse_turn_file(s); });
      const auto r = verify_artifact(a, t);
      std::string text;
      for (const auto& k : r.checks)
        text += k.name + "=" + (k.ok ? "ok" : "FAIL") + (k.detail.empty() ? "" : " (" + k.detail + ")") + "\n";
      if (a.variant == FrameVariant::Hp && r.find("contact")) text += std::string("contacts=") + (r.find("contact")->ok ? "1" : "0") + "\n";
      if (r.ok() && r.assignment) text += emit_assignment(*r.assignment);
      emit(c, text);
      return r.ok() ? kOk : kNegative;
    }
    if (*ren) {
      const auto text = read_file(input_path);
      if (!text.empty() && text.front() == '{') {
        if (turns_path.empty()) throw ParseError(1, 1, "rendering an artifact needs --turns");
        const auto a = parse_artifact(text);
        const auto t = with_path(turns_path, [](const std::string& s) { return parse_turn_file(s); });
        emit(c, render_svg(trace_artifact(a, t), a.variant == FrameVariant::Closed, style));
        return kOk;
      }
      const auto cfg = with_path(input_path, [](const std::string& s) { return parse_config(s); });
      std::optional<std::vector<Color>> colors;
      if (!colors_path.empty()) colors = load_chain(colors_path).colors;
      if (colors && colors->size() != cfg.vertex_count()) throw ParseError(1, 1, "chain colors do not match the configuration");
      emit(c, render_config(cfg, colors, style));
      return kOk;
    }
    if (*en) {
      const auto chain = load_chain(chain_path);
      const auto opts = search_options(c);
      std::uint64_t n = 0;
      std::string text;
      for_each_folding(chain, {}, [&](const TurnSequence& t) {
        if (opts.box) {
          const auto b = bounding_box(embed(chain, t, {}).points);
          const bool fits = (b.width() <= opts.box->width() && b.height() <= opts.box->height()) ||
                            (b.width() <= opts.box->height() && b.height() <= opts.box->width());
          if (!fits) return true;
        }
        ++n;
        if (!count_only) text += to_string(t) + "\n";
        return true;
      }, opts.budget);
      emit(c, text + "count=" + std::to_string(n) + "\n");
      return n > 0 ? kOk : kNegative;
    }
    if (*gal) return gallery(c.out, style);
  } catch (const BudgetExceeded& e) {
    std::cout << e.what() << "\n";
    return kBudget;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
