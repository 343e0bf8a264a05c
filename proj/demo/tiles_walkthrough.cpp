// Bound entanglement in a 3x3 system: the Tiles complement is PPT, its range
// holds no product vector, and a decomposition into Schmidt-rank-2 states
// exists. Together that pins its Schmidt number to 2.

#include "schmidt/io.hpp"

#include <iostream>

using namespace schmidt;

int main() {
  const DensityOp rho = tiles_state();
  const Bipartition cut = Bipartition::first_vs_rest(2);

  const PptVerdict ppt = ppt_check(rho, cut);
  const BiRank br = birank(rho, cut);
  std::cout << "PPT: " << std::boolalpha << ppt.is_ppt << " (min eigenvalue " << ppt.min_eig_gamma << ")\n";
  std::cout << "birank: (" << br.rank_rho << ", " << br.rank_gamma << ")\n";

  const CesCertificate ces = ces_certify(rho, tiles_upb());
  std::cout << "range free of product vectors: " << ces.certified << " via " << ces.method << "\n";

  Budget budget;
  budget.seed = 1;
  const SnBound sn = sn_bounds(rho, cut, budget, tiles_upb());
  std::cout << "Schmidt number in [" << sn.lo << ", " << sn.hi << "]"
            << "  (lo: " << sn.lo_certificate << ", hi: " << sn.hi_certificate << ")\n";
  if (sn.decomposition) {
    const Decomposition& d = *sn.decomposition;
    std::cout << d.size() << " pure states, max Schmidt rank " << d.max_schmidt_rank << ", residual "
              << d.target_residual << "\n";
  }
  std::cout << "entanglement of formation <= " << eof_bound(sn) << " ebit\n";

  // Project A onto a random plane: the result lives on 2x3 and is PPT, so separable.
  Rng rng = stream_rng(budget.seed, 1);
  const ProjBoundReport rep = check_proj_bounds(rho, LocalProjector::haar(3, 2, rng), Side::A, budget);
  std::cout << "after a rank-2 projection: [" << rep.sn_sigma->lo << ", " << rep.sn_sigma->hi << "]\n";
  return 0;
}
