#include <iostream>
#include <string>
#include <vector>

#include "qcluster/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const std::vector<std::string> args(argv, argv + argc);
  return qcluster::cli::run_command_line(args, std::cout, std::cerr);
}
