#include "mmcurv/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return mmcurv::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
