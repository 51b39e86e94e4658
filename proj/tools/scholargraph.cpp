#include <iostream>

#include "scholargraph/cli.hpp"

int main(int argc, char** argv) { return scholargraph::run_cli(argc, argv, std::cout, std::cerr); }
