#include <iostream>
#include <string>
#include <vector>

#include "fmscant/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fmscant::run_cli(args, std::cout, std::cerr);
}
