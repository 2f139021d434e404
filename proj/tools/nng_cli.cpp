#include <iostream>
#include <string>
#include <vector>

#include "nng/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return nng::run_cli(args, std::cout, std::cerr);
}
