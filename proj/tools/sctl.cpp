#include <iostream>
#include <string>
#include <vector>

#include "sctl/frontend.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sctl::run_cli(args, std::cout, std::cerr);
}
