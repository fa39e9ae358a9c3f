#include <iostream>
#include <string>
#include <vector>

#include "agepinn/cli/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return agepinn::cli::run(args, std::cout, std::cerr);
}
