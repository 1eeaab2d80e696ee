// isokin_main.cpp

#include "isokin/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return isokin::run_cli(argc, argv, std::cout, std::cerr); }
