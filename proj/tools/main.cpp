// Apache License, Version 2.0, refer to LICENSE.txt
#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return puchain::cli::run(args, std::cout, std::cerr);
}
