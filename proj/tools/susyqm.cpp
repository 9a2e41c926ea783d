#include <iostream>
#include <string>
#include <vector>

#include "susyqm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return susyqm::cli::run(args, std::cout, std::cerr);
}
