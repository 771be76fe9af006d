#include <iostream>
#include <string>
#include <vector>

#include "subspace_ent/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return subspace_ent::dispatch(args, std::cout, std::cerr);
}
