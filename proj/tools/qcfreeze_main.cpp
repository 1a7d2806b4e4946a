#include <iostream>

#include "qcfreeze/cli.hpp"

int main(int argc, char** argv) { return qcf::cli::run(argc, argv, std::cout, std::cerr); }
