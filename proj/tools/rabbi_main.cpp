#include <iostream>

#include "rabbi/cli.hpp"

int main(int argc, char** argv) { return rabbi::cli_main(argc, argv, std::cout, std::cerr); }
