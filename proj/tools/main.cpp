#include <iostream>

#include "edurec/cli.hpp"

int main(int argc, char** argv) {
  return edurec::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
