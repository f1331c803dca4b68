#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> env;
  if (const char* v = std::getenv("IQPROB_TOL")) env = v;
  return iqprob::cli::run(args, std::cout, std::cerr, env);
}
