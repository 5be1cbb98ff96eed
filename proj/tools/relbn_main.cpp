#include <iostream>

#include "relbn/cli.hpp"

int main(int argc, char** argv) { return relbn::run_cli(argc, argv, std::cout, std::cerr); }
