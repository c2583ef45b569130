#include <iostream>

#include "quasivar/cli.hpp"

int main(int argc, char** argv) { return quasivar::cli::run(argc, argv, std::cout, std::cerr); }
