#include <iostream>

#include "isr/cli.hpp"

int main(int argc, char** argv) { return isr::run_cli(argc, argv, std::cout, std::cerr); }
