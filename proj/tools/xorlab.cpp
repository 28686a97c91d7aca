#include <iostream>

#include "xorlab/cli.hpp"

int main(int argc, char** argv) {
  return xorlab::cli::run_cli(argc, argv, std::cout, std::cerr);
}
