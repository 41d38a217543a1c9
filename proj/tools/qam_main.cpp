#include <iostream>

#include "qam/cli.hpp"

int main(int argc, char** argv) { return qam::run_cli(argc, argv, std::cout, std::cerr); }
