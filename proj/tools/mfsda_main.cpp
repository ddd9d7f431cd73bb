#include <iostream>

#include "mfsda/cli.hpp"

int main(int argc, char** argv) { return mfsda::cli::run(argc, argv, std::cout, std::cerr); }
