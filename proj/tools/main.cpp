#include <iostream>
#include <vector>

#include "modalgrid/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return modalgrid::cli::run(args, std::cout, std::cerr);
}
