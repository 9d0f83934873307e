#include <iostream>
#include <string>
#include <vector>

#include "jacp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return jacp::run_cli(args, std::cout, std::cerr);
}
