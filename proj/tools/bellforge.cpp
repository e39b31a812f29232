#include <iostream>
#include <string>
#include <vector>

#include "bellforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return bellforge::run_cli(args, std::cout, std::cerr);
}
