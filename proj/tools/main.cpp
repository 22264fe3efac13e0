#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return semisimp::run_cli(argc, argv, std::cout, std::cerr); }
