#include <iostream>

#include "logaff/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return logaff::cli::run(args, std::cout, std::cerr);
}
