#include <iostream>
#include <string>
#include <vector>

#include "stirsap/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return stirsap::dispatch(args, std::cout, std::cerr);
}
