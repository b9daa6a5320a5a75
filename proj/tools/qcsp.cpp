#include <iostream>

#include "qcsp/commands.hpp"

int main(int argc, char** argv) { return qcsp::cli::run_cli(argc, argv, std::cout, std::cerr); }
