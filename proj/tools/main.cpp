#include <iostream>

#include "hyperdiff/cli.hpp"

int main(int argc, char** argv) { return hyperdiff::cli::main(argc, argv, std::cout, std::cerr); }
