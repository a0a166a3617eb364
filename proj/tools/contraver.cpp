#include <iostream>

#include "contraver/cli.hpp"

int main(int argc, char** argv) { return contraver::cli::main(argc, argv, std::cout, std::cerr); }
