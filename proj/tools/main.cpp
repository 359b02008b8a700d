#include <iostream>

#include "gauss_regret/cli.hpp"

int main(int argc, char** argv) { return gauss_regret::run_cli(argc, argv, std::cout, std::cerr); }
