#include <iostream>

#include "hyptctl/cli.hpp"

int main(int argc, char** argv) { return hyptctl::cli_run(argc, argv, std::cout, std::cerr); }
