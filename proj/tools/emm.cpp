// Command-line front end; see `emm --help`.

#include <iostream>
#include <string>
#include <vector>

#include "emmemory/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return emm::cli::main_entry(args, std::cout, std::cerr);
}
