#include <iostream>

#include "riq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return riq::run_command(args, std::cout, std::cerr);
}
