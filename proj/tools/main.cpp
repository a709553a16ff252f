#include "mpdyn/scenario.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return mpdyn::cli::run_main(argc, argv, std::cout, std::cerr);
}
