#include <iostream>

#include "nildist/cli.hpp"

int main(int argc, char** argv) {
  return nildist::run_cli(argc, argv, std::cout, std::cerr);
}
