#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include <CLI11.hpp>

#include "chainfold/io.hpp"
#include "chainfold/solvers.hpp"

using namespace chainfold;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::string kCorpus = std::string(CHAINFOLD_SOURCE_DIR) + "/data/corpus/";

FixedAngleChain random_open_chain(std::mt19937_64& rng, std::size_t max_edges, std::size_t max_corners, bool colored) {
  FixedAngleChain c;
  const std::size_t edges = 1 + rng() % max_edges;
  std::size_t corners = 0;
  for (std::size_t i = 0; i + 1 < edges; ++i) {
    const bool corner = corners < max_corners && rng() % 2;
    corners += corner;
    c.angles.push_back(corner ? Angle::Corner : Angle::Straight);
  }
  if (colored) {
    std::vector<Color> cols;
    for (std::size_t i = 0; i < c.vertex_count(); ++i) cols.push_back(rng() % 3 == 0 ? Color::P : Color::H);
    c.colors = cols;
  }
  return c;
}

TurnSequence turns_of(std::uint64_t mask, std::size_t k) {
  TurnSequence t;
  for (std::size_t i = 0; i < k; ++i) t.turns.push_back((mask >> i) & 1 ? Turn::Right : Turn::Left);
  return t;
}

// ---- 1: zig-zag embedding -------------------------------------------------------

Outcome zigzag_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 1000; ++i) {
    const auto c = random_open_chain(rng, 200, 200, false);
    const auto cfg = embed(c, zigzag_turns(c), {});
    if (!is_noncrossing(cfg) || !geometric_noncrossing_oracle(cfg)) return {false, "chain " + std::to_string(i) + " crosses"};
    for (std::size_t v = 1; v < cfg.points.size(); ++v)
      if (cfg.points[v].x + cfg.points[v].y <= cfg.points[v - 1].x + cfg.points[v - 1].y)
        return {false, "chain " + std::to_string(i) + " not monotone in x+y"};
  }
  return {true, "1000 chains noncrossing and strictly monotone"};
}

// ---- 2: closed chain with only crossing closures --------------------------------

Outcome crossing_only_chain() {
  const auto chain = chain_from_segments({Topology::Closed, {1, 2, 1, 1, 2, 1}});
  const std::size_t k = chain.corner_count();
  if (k != 6) return {false, "expected 6 corners, got " + std::to_string(k)};
  std::size_t closed = 0, flat = 0, tried = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
    const auto t = turns_of(m, k);
    if (t.turns[0] != Turn::Left) continue;  // reflection quotient
    ++tried;
    const auto cfg = embed(chain, t, {});
    if (!check_closure(chain, cfg, t)) continue;
    ++closed;
    flat += is_noncrossing(cfg) && geometric_noncrossing_oracle(cfg);
  }
  const bool solver_agrees = solve_flatten(chain).status == SolveStatus::Exhausted;
  return {tried == 32 && flat == 0 && closed >= 1 && solver_agrees,
          std::to_string(tried) + " sequences, " + std::to_string(closed) + " closed, " + std::to_string(flat) +
              " noncrossing, solver " + (solver_agrees ? "agrees" : "disagrees")};
}

// ---- 3: fast noncrossing check against the geometric oracle ---------------------

Outcome noncrossing_equivalence(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t crossing = 0, closed = 0;
  for (int i = 0; i < 10000; ++i) {
    FixedAngleChain c;
    TurnSequence t;
    if (i % 4 == 3) {
      // closed chains from random rectangles, some angles toggled
      const std::size_t w = 1 + rng() % 7, h = 1 + rng() % 7;
      for (int side = 0; side < 4; ++side) {
        c.angles.push_back(Angle::Corner);
        for (std::size_t s = 1; s < (side % 2 ? h : w); ++s) c.angles.push_back(Angle::Straight);
      }
      for (auto& a : c.angles)
        if (rng() % 8 == 0) a = a == Angle::Corner ? Angle::Straight : Angle::Corner;
      c.topology = Topology::Closed;
      if (c.angles.size() > 30) continue;
    } else {
      c = random_open_chain(rng, 30, 30, false);
    }
    for (std::size_t k = 0; k < c.corner_count(); ++k) t.turns.push_back(rng() % 2 ? Turn::Left : Turn::Right);
    const auto cfg = embed(c, t, {});
    const bool fast = is_noncrossing(cfg), slow = geometric_noncrossing_oracle(cfg);
    if (fast != slow) return {false, "disagreement on configuration " + std::to_string(i)};
    crossing += !fast;
    closed += c.topology == Topology::Closed && check_closure(c, cfg);
  }
  return {true, "10000 agree (" + std::to_string(crossing) + " crossing, " + std::to_string(closed) + " closed)"};
}

// ---- 4: gadget forcing certificates --------------------------------------------

std::set<std::string> names(const std::vector<TurnSequence>& ts) {
  std::set<std::string> s;
  for (const auto& t : ts) s.insert(to_string(t));
  return s;
}

FoldConstraints pinned_ends(const GadgetFragment& g) {
  FoldConstraints c;
  c.pose = g.intended[0].pose;
  c.pins.push_back({g.segments.total_length(), g.corners(0).back()});
  return c;
}

Outcome gadget_certificates() {
  std::string d;
  bool ok = true;
  {
    const InsulationSpec s{3, 5, {2}};
    const auto g = build_insulation(s);
    auto c = pinned_ends(g);
    const std::int64_t reach = 2 * s.h + 4;
    c.box = Box{{0, -reach}, {2 * s.width, reach}};
    const auto found = enumerate_foldings(g.chain(), c);
    std::set<std::string> intended;
    for (const auto& f : g.intended) intended.insert(to_string(f.turns));
    ok &= found.size() == 8 && names(found) == intended;
    d += "insulation " + std::to_string(found.size());
  }
  {
    const auto g = build_choice();
    FoldConstraints c;
    c.pose = {{0, 0}, Heading::NegY};
    c.pins.push_back({g.segments.total_length(), {1, 0}});
    for (std::int64_t x = -40; x <= 40; ++x)
      if (x <= -1 || x >= 2) c.obstacles.insert({x, 0});
    const auto found = enumerate_foldings(g.chain(), c);
    std::set<std::int64_t> shifts;
    std::set<Point> locations;
    for (const auto& f : g.intended) {
      locations.insert(f.anchors.at("tab"));
      if (f.pose.heading != Heading::NegY) continue;
      for (const auto& t : found)
        if (t == f.turns) shifts.insert(f.anchors.at("tab").x);
    }
    ok &= found.size() == 5 && shifts.size() == 3 && locations.size() == 6;
    d += ", choice " + std::to_string(found.size()) + "/" + std::to_string(shifts.size()) + " shifts/" +
         std::to_string(locations.size()) + " locations";
  }
  {
    std::size_t total = 0;
    for (bool up : {false, true}) {
      const auto g = build_hook({up, 102, 50, 101, 3, HookRole::Tab, 50, 50, 0});
      FoldConstraints c;
      c.pose = g.intended[0].pose;
      c.box = bounding_box(g.corners(0));
      const auto found = enumerate_foldings(g.chain(), c);
      ok &= found.size() == 1 && found[0] == g.intended[0].turns;
      total += found.size();
    }
    d += ", hook " + std::to_string(total) + "/2";
  }
  {
    const auto g = build_variable({{true, true}, {false, false}});
    auto c = pinned_ends(g);
    c.box = Box{{0, -3}, {variable_width(2), 3}};
    const auto found = enumerate_foldings(g.chain(), c);
    std::set<std::string> intended;
    for (const auto& f : g.intended) intended.insert(to_string(f.turns));
    ok &= found.size() == 2 && names(found) == intended;
    d += ", variable " + std::to_string(found.size());
  }
  return {ok, d};
}

// ---- 5 and 6: reduction witnesses and audits ------------------------------------

std::vector<std::string> corpus_names() {
  std::vector<std::string> n{"single", "four_clauses", "long_edge", "above_and_below", "unit_pair_unsat"};
  for (int i = 1; i <= 18; ++i) n.push_back((i < 10 ? "random_0" : "random_") + std::to_string(i));
  return n;
}

struct CorpusRun {
  std::size_t instances = 0, witnesses = 0, artifacts = 0;
  std::string witness_failure, audit_failure;
};

CorpusRun run_corpus() {
  CorpusRun r;
  bool has_example = false;
  for (const auto& n : corpus_names()) {
    const auto f = parse_dimacs(read_file(kCorpus + n + ".cnf"));
    const auto d = parse_drawing(read_file(kCorpus + n + ".lvl"), f);
    check_drawing(f, d);
    if (f.variables > 6 || f.clauses.size() > 5) r.witness_failure = n + " exceeds n <= 6, m <= 5";
    has_example |= n == "four_clauses";
    ++r.instances;
    const auto models = satisfying_assignments(f);
    for (auto v : {FrameVariant::Closed, FrameVariant::Hp, FrameVariant::Square}) {
      const auto a = reduce(f, d, v);
      ++r.artifacts;
      for (const auto& c : audit_artifact(a))
        if (!c.ok && r.audit_failure.empty())
          r.audit_failure = n + " " + std::string(frame_variant_name(v)) + " " + c.name + ": " + c.detail;
      for (const auto& m : models) {
        const auto w = make_witness(a, m);
        std::string why;
        if (!w.ok()) why = w.message;
        else {
          const auto rep = verify_artifact(a, *w.turns);
          if (!rep.ok()) why = "verification failed";
          else if (v == FrameVariant::Hp && !rep.find("contact")->ok) why = "contact count";
          else if (v == FrameVariant::Square && (!rep.find("square")->ok || a.total_length() > 48 * a.inner_length))
            why = "square packing";
          else if (extract_assignment(a, *w.turns) != m) why = "round trip";
        }
        if (!why.empty() && r.witness_failure.empty()) r.witness_failure = n + " " + std::string(frame_variant_name(v)) + ": " + why;
        r.witnesses += why.empty();
      }
    }
  }
  if (!has_example) r.witness_failure = "four-clause example missing";
  return r;
}

// ---- 7: toy-parameter completeness by full enumeration --------------------------

struct ToyBuild {
  std::string name;
  CnfFormula formula;
  LeveledDrawing drawing;
};

std::vector<ToyBuild> toy_builds() {
  std::vector<ToyBuild> out;
  out.push_back({"(x1)", {1, {{1}}}, {{{1, 0}}, {{2, 0}}}});
  out.push_back({"(x1 | x2)", {2, {{1, 2}}}, {{{1, 0}, {1, 1}}, {{2, 0.5}}}});
  out.push_back({"(x1 | ~x2 | x3)", {3, {{1, -2, 3}}}, {{{1, 0}, {1, 1}, {1, 2}}, {{2, 1}}}});
  return out;
}

Outcome toy_completeness(std::uint64_t budget) {
  std::string d;
  bool ok = true;
  auto attempt = [&](const ToyBuild& b, bool expect_models) {
    const auto a = reduce(b.formula, b.drawing, FrameVariant::Closed, {true});
    const auto chain = chain_from_segments(a.segments);
    std::size_t found = 0, bad = 0;
    bool exhausted = true;
    try {
      for_each_folding(chain, {}, [&](const TurnSequence& t) {
        ++found;
        try {
          const auto m = extract_assignment(a, t);
          bad += !satisfies(b.formula, m);
        } catch (const ChainError&) {
          ++bad;
        }
        return true;
      }, budget);
    } catch (const BudgetExceeded&) {
      exhausted = false;
    }
    ok &= exhausted && bad == 0 && (expect_models ? found > 0 : found == 0);
    d += (d.empty() ? "" : "; ") + b.name + " " + std::to_string(a.segments.lengths.size()) + " segments: " +
         (exhausted ? "enumerated" : "budget exhausted") + ", " + std::to_string(found) + " foldings, " +
         std::to_string(bad) + " non-extracting";
  };
  for (const auto& b : toy_builds()) attempt(b, true);
  const auto f = parse_dimacs(read_file(kCorpus + "unit_pair_unsat.cnf"));
  attempt({"(x1)&(~x1)", f, parse_drawing(read_file(kCorpus + "unit_pair_unsat.lvl"), f)}, false);
  return {ok, d};
}

// ---- 8: solvers against exhaustive enumeration ----------------------------------

struct Oracle {
  bool any_flat = false;
  std::int64_t best_contacts = -1;
  bool fits = false;
};

Oracle brute_force(const FixedAngleChain& c, std::int64_t side) {
  Oracle o;
  const std::size_t k = c.corner_count();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
    const auto t = turns_of(m, k);
    const auto cfg = embed(c, t, {});
    if (!geometric_noncrossing_oracle(cfg)) continue;
    if (c.topology == Topology::Closed) {
      o.any_flat |= check_closure(c, cfg, t);
      continue;
    }
    if (c.colors) o.best_contacts = std::max<std::int64_t>(o.best_contacts, count_hh_contacts(cfg, c.colors));
    const auto b = bounding_box(cfg.points);
    o.fits |= b.width() <= side && b.height() <= side;
  }
  return o;
}

Outcome solver_oracle(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t flat = 0, fits = 0;
  for (int i = 0; i < 200; ++i) {
    const auto open = random_open_chain(rng, 24, 18, true);
    const std::int64_t side = 1 + static_cast<std::int64_t>(rng() % 6);
    FixedAngleChain closed;
    closed.topology = Topology::Closed;
    const std::size_t w = 1 + rng() % 5, h = 1 + rng() % 5;
    for (int s = 0; s < 4; ++s) {
      closed.angles.push_back(Angle::Corner);
      for (std::size_t j = 1; j < (s % 2 ? h : w); ++j) closed.angles.push_back(Angle::Straight);
    }
    for (auto& a : closed.angles)
      if (rng() % 6 == 0) a = a == Angle::Corner ? Angle::Straight : Angle::Corner;
    while (closed.corner_count() > 18) closed.angles.erase(std::find(closed.angles.begin(), closed.angles.end(), Angle::Corner));

    const auto oo = brute_force(open, side), oc = brute_force(closed, 0);
    const auto hp = solve_hp(open), pack = solve_pack(open, side), flt = solve_flatten(closed);
    const std::string at = "chain " + std::to_string(i);
    if (hp.status != SolveStatus::Found || hp.objective != oo.best_contacts) return {false, at + ": hp optimum differs"};
    if ((pack.status == SolveStatus::Found) != oo.fits || pack.status == SolveStatus::BudgetExceeded)
      return {false, at + ": packing status differs"};
    if ((flt.status == SolveStatus::Found) != oc.any_flat || flt.status == SolveStatus::BudgetExceeded)
      return {false, at + ": flattening status differs"};
    flat += oc.any_flat;
    fits += oo.fits;
  }
  return {true, "200 chains agree (" + std::to_string(flat) + " flat-foldable, " + std::to_string(fits) + " packable)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::uint64_t seed = 20240611;
  std::uint64_t budget = std::uint64_t{1} << 24;
  std::vector<int> expect_fail, only;
  app.add_option("--seed", seed, "Seed for the randomized criteria");
  app.add_option("--enumeration-budget", budget, "Node budget for the toy completeness enumeration");
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail; they do not affect the exit status");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  std::optional<CorpusRun> corpus;
  auto corpus_run = [&]() -> const CorpusRun& {
    if (!corpus) corpus = run_corpus();
    return *corpus;
  };
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"zig-zag embedding of 1000 open chains", [&] { return zigzag_suite(seed); }},
      {"closed chain [1,2,1,1,2,1] only closes with crossings", crossing_only_chain},
      {"noncrossing check matches geometric oracle", [&] { return noncrossing_equivalence(seed + 1); }},
      {"gadget forcing certificates", gadget_certificates},
      {"reduction witnesses verify and round-trip",
       [&] {
         const auto& r = corpus_run();
         return Outcome{r.witness_failure.empty() && r.instances >= 20,
                        r.witness_failure.empty() ? std::to_string(r.instances) + " instances, " + std::to_string(r.witnesses) + " witnesses"
                                                  : r.witness_failure};
       }},
      {"structural audits",
       [&] {
         const auto& r = corpus_run();
         return Outcome{r.audit_failure.empty(),
                        r.audit_failure.empty() ? std::to_string(r.artifacts) + " artifacts" : r.audit_failure};
       }},
      {"toy-parameter completeness by enumeration", [&] { return toy_completeness(budget); }},
      {"solvers match exhaustive enumeration", [&] { return solver_oracle(seed + 2); }},
  };
  const double limits[] = {5, 1, 10, 240, 600, 600, 1800, 300};

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && secs > limits[i]) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    const bool expected = std::find(expect_fail.begin(), expect_fail.end(), id) != expect_fail.end();
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " ("
              << o.detail << ", " << std::fixed << std::setprecision(2) << secs << " s)"
              << (!o.pass && expected ? " [known failure]" : "") << std::endl;
    unexpected += !o.pass && !expected;
  }
  return unexpected == 0 ? 0 : 1;
}
