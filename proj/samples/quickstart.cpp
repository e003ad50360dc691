// Generate a game, run a few solvers on it and check each answer exactly.

#include "bimatrix/approx.hpp"
#include "bimatrix/exact.hpp"
#include "bimatrix/gen.hpp"
#include "bimatrix/ts.hpp"
#include "bimatrix/verify.hpp"

#include <cstdio>

int main() {
  using namespace bimatrix;
  const Game g = gen::gen_covariant(30, -0.5, 7);
  const RationalGame exact = RationalGame::from(g);

  for (const ApproxResult& r : {approx::dmp(g), approx::bbm1(g), approx::bbm2(g), approx::ts(g, 0.001)}) {
    const Rational eps = verify::exact_epsilon(exact, to_rational_profile(r.profile), r.kind);
    std::printf("%-6s eps %.6f  (exact %.6f)  %.4f s\n", r.algorithm.c_str(), r.eps, eps.get_d(), r.solve_time);
  }

  const auto lh = exact::lemke_howson(g, 0);
  if (lh.exact)
    std::printf("lh     exact NE, eps = %s after %ld pivots\n",
                verify::exact_epsilon(exact, *lh.exact, EpsKind::ApproxNE).get_str().c_str(), lh.pivots);
  return 0;
}
