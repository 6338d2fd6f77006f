#include <iostream>

#include "planefield/cli.hpp"

int main(int argc, char** argv) { return planefield::run_cli(argc, argv, std::cout, std::cerr); }
