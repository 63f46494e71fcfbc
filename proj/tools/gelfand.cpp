#include <iostream>
#include <string>
#include <vector>

#include "gelfand/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gelfand::run_cli(args, std::cout, std::cerr);
}
