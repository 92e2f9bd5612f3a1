#include <iostream>

#include "chainfold/io.hpp"
#include "chainfold/solvers.hpp"

using namespace chainfold;

int main() {
  const auto chain = parse_chain("open SCCSCSCC\ncolors HPPHPHPPHH\n");

  // any open chain folds flat by alternating turns
  const auto zig = embed(chain, zigzag_turns(chain), {});
  std::cout << "zig-zag noncrossing: " << is_noncrossing(zig) << "\n";

  const auto best = solve_hp(chain);
  std::cout << "best contacts: " << *best.objective << " via " << to_string(*best.witness) << "\n";

  const auto cfg = embed(chain, *best.witness, {});
  std::cout << emit_config(cfg);
  write_file("hp_best.svg", render_config(cfg, chain.colors, {}));
}
