#include <iostream>

#include "chainfold/gadgets.hpp"
#include "chainfold/solvers.hpp"

using namespace chainfold;

int main() {
  // a variable gadget with two occurrences folds in exactly two ways
  const auto g = build_variable({{true, true}, {false, false}});
  FoldConstraints c;
  c.pose = g.intended[0].pose;
  c.pins.push_back({g.segments.total_length(), g.corners(0).back()});
  c.box = Box{{0, -3}, {variable_width(2), 3}};
  for (const auto& t : enumerate_foldings(g.chain(), c)) std::cout << to_string(t) << "\n";
  for (const auto& f : g.intended) std::cout << f.name << ": " << to_string(f.turns) << "\n";
}
