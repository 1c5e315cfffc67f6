#include <iostream>
#include <string>
#include <vector>

#include "plausets/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return plausets::run_cli(args, std::cout, std::cerr);
}
