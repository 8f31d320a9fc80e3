#include <iostream>

#include "xprod_cli/commands.hpp"

int main(int argc, char** argv) { return xprod::cli::run(argc, argv, std::cout, std::cerr); }
