// Envelope of a random credal set and its classical axiom report.
//   usage: demo_credal_envelope [n] [count] [seed]

#include "iqprob/iqprob.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
  using namespace iqprob;
  using namespace iqprob::classical;
  const unsigned n = argc > 1 ? static_cast<unsigned>(std::atoi(argv[1])) : 4;
  const std::size_t count = argc > 2 ? static_cast<std::size_t>(std::atoi(argv[2])) : 5;
  Rng rng(argc > 3 ? static_cast<std::uint64_t>(std::atoll(argv[3])) : 0);
  const auto m = envelope(random_credal_set(EventSpace(n), count, rng));
  for (const auto& r : {check_axioms_classical(m), check_derived_inequalities(m)})
    for (const auto& c : r.checks)
      std::printf("%-22s %s  worst margin %+.3e over %zu\n", c.name.c_str(), c.pass ? "ok  " : "FAIL", c.worst_margin,
                  c.checked);
  const Event a = 0b0011, b = 0b0110;
  const auto j = classical_joint(m, a, b);
  std::printf("joint of {0,1} and {1,2}: [%.4f, %.4f]\n", j.lower(), j.upper());
  return 0;
}
