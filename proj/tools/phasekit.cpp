#include <iostream>

#include "phasekit/cli.hpp"

int main(int argc, char** argv) {
  return phasekit::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
