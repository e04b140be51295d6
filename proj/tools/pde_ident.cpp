#include <iostream>

#include "pdeid/cli.hpp"

int main(int argc, char** argv) { return pdeid::cli::run(argc, argv, std::cout, std::cerr); }
