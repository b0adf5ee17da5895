#include <iostream>

#include "halfreg/cli.hpp"

int main(int argc, char** argv) {
  return halfreg::cli::run(argc, argv, std::cout, std::cerr);
}
