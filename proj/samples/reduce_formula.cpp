#include <iostream>

#include "chainfold/io.hpp"

using namespace chainfold;

int main() {
  // (~x2 | ~x3 | ~x4) & (x4 | x3 | ~x1) & (~x3 | x1) & (x1 | x2 | x3)
  const CnfFormula f{4, {{-2, -3, -4}, {4, 3, -1}, {-3, 1}, {1, 2, 3}}};
  LeveledDrawing d;
  d.variables = {{5, 3}, {3, -1}, {3, 1}, {1, 1}};
  d.clauses = {{2, 0}, {2, 2}, {4, 2}, {4, 0}};
  check_drawing(f, d);

  for (auto v : {FrameVariant::Closed, FrameVariant::Hp, FrameVariant::Square}) {
    const auto a = reduce(f, d, v);
    const auto w = make_witness(a, {{1, true}, {2, false}, {3, true}, {4, true}});
    const auto r = verify_artifact(a, *w.turns);
    std::cout << frame_variant_name(v) << ": " << a.segments.lengths.size() << " segments, length "
              << a.total_length() << ", verified " << r.ok() << ", x2=" << r.assignment->at(2) << "\n";
  }
}
