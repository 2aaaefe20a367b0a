#include <iostream>
#include <string>
#include <vector>

#include "erw_cli/cli.hpp"

int main(int argc, char** argv) {
  return erw::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
