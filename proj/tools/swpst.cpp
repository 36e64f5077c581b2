#include <iostream>

#include "swpst/cli.hpp"

int main(int argc, char** argv) { return swpst::cli::run(argc, argv, std::cout, std::cerr); }
