#include <iostream>
#include <string>
#include <vector>

#include "odsbounds/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return odsbounds::run_cli(std::move(args), std::cout, std::cerr);
}
