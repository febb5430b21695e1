#include <iostream>
#include <string>
#include <vector>

#include "homocone/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return homocone::run_cli(args, std::cout, std::cerr);
}
