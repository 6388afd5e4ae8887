// Walk-through: build the seven-point set over [3]^3, certify it, and use it to
// recover a latin cube from seven of its entries.

#include <iostream>

#include "freqcube/freqcube.hpp"

int main() {
  using namespace freqcube;
  const PointSet t = three_cube_set();
  std::cout << "seven-point set over [3]^3:\n" << render_grid(t);

  const auto cert = certify_supertesting(t, 1);
  std::cout << "no 1-bitrade avoids it: " << to_string(cert.verdict) << " (" << cert.evidence.at("nodes")
            << " search nodes)\n";

  const FreqParams latin(3, 3, 1, {1, 1, 1});
  const auto cubes = enumerate_cubes(latin);
  const CubeArray& f = cubes.back();
  const auto r = reconstruct_csp(restrict_to(f, t, 3), t, latin);
  std::cout << "latin cubes: " << cubes.size() << "; recovered the last one from 7 cells: "
            << (r.cube == f && r.unique ? "yes" : "no") << '\n'
            << render_grid(r.cube);
  return 0;
}
