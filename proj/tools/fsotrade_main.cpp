#include <iostream>

#include "fsotrade/cli_runner.hpp"

int main(int argc, char** argv) { return fsotrade::cli::main(argc, argv, std::cout, std::cerr); }
