#include <iostream>
#include <string>
#include <vector>

#include "rpi/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rpi::cli::run(std::move(args), std::cin, std::cout, std::cerr);
}
