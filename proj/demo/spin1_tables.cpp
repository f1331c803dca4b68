// Prints the spin-1 golden comparison and the two dominance spectra.

#include "iqprob/iqprob.hpp"

#include <cstdio>

int main() {
  using namespace iqprob;
  using spin::Axis;
  const auto report = spin::reproduce_tables();
  for (const auto& row : report.rows)
    std::printf("%-40s %s %.2e\n", row.id.c_str(), row.pass ? "ok  " : "FAIL", row.max_deviation);

  const auto& c = spin::spin1_catalog();
  const ProjectorPair a{c.sum(Axis::X, {0, -1}), c.sum(Axis::Z, {1, 0})};
  const ProjectorPair b{c.sum(Axis::X, {0, 1}), c.sum(Axis::Z, {1, 0})};
  const auto d = dominance_spectrum(a, b);
  std::printf("\nlower(x{0,-1}, z{1,0}) - upper(x{0,1}, z{1,0}): %.6f %.6f %.6f\n", d.eigenvalues(0),
              d.eigenvalues(1), d.eigenvalues(2));
  if (d.witness) {
    const auto rho = DensityMatrix::pure(*d.witness);
    const auto v = sure_dominance(rho, a, b);
    std::printf("on the top eigenvector the first event is surely more probable: %s (margin %.6f)\n",
                v.surely_more_probable ? "yes" : "no", v.margin);
  }
  return report.all_pass() ? 0 : 2;
}
