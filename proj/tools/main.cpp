#include <iostream>
#include <string>
#include <vector>

#include "l1persist/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return l1persist::run_cli(args, std::cout, std::cerr);
}
