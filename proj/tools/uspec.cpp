#include <iostream>

#include "uspec/cli.hpp"

int main(int argc, char** argv) { return uspec::run_cli(argc, argv, std::cout, std::cerr); }
