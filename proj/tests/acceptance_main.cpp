#include <cstdlib>
#include <iostream>
#include <string>

#include "stir/acceptance.hpp"

int main(int argc, char** argv) {
  stir::AcceptanceOptions options;
  options.log = &std::cout;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--quick") {
      options.quick = true;
    } else if (arg.rfind("--seed=", 0) == 0) {
      options.seed = std::stoull(arg.substr(7));
    } else {
      std::cerr << "usage: acceptance [--quick] [--seed=N]\n";
      return 2;
    }
  }
  int failed = 0;
  for (const auto& r : stir::run_acceptance(options)) {
    failed += r.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
