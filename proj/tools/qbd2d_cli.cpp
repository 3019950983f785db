#include "qbd2d/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qbd2d::cli::main(argc, argv, std::cout, std::cerr); }
