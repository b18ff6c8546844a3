#include <iostream>

#include "fretsolve/cli.h"

int main(int argc, char** argv) { return fretsolve::run_cli(argc, argv, std::cout, std::cerr); }
