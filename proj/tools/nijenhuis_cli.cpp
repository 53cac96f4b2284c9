#include <iostream>

#include "nijenhuis/cli.hpp"

int main(int argc, char** argv) {
  nij::CommandResult r = nij::run_command(std::vector<std::string>(argv + 1, argv + argc));
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}
