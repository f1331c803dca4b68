// Decomposes a seeded random projector pair and prints its probability
// interval on a random state.
//   usage: demo_random_pair [dim] [seed]

#include "iqprob/iqprob.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
  using namespace iqprob;
  const Index dim = argc > 1 ? std::atoi(argv[1]) : 5;
  const auto seed = static_cast<std::uint64_t>(argc > 2 ? std::atoll(argv[2]) : 0);
  Rng rng(seed);
  const auto p = random_projector(dim, rng);
  const auto q = random_projector(dim, rng);
  const auto d = cs_decompose(p, q);
  std::printf("dim %ld  rank p %ld  rank q %ld\n", static_cast<long>(dim), static_cast<long>(p.rank()),
              static_cast<long>(q.rank()));
  std::printf("blocks: generic 2x%ld  h11 %ld  h10 %ld  h01 %ld  h00 %ld\n", static_cast<long>(d.m),
              static_cast<long>(d.m11), static_cast<long>(d.m10), static_cast<long>(d.m01), static_cast<long>(d.m00));
  for (double a : d.principal_angles) std::printf("  angle %.6f\n", a);

  const auto rho = random_density_matrix(dim, rng);
  const auto i = probability_interval(rho, p, q);
  std::printf("interval [%.6f, %.6f]  tr(rho pq) = %.6f\n", i.lower(), i.upper(), rho.expectation(p.matrix() * q.matrix()));
  const auto rep = check_axioms(p, q);
  std::printf("axioms %s\n", rep.all_pass() ? "pass" : "FAIL");
  return rep.all_pass() ? 0 : 2;
}
