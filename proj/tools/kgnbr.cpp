#include "kgnbr/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return kgnbr::cli::run(argc, argv, std::cout, std::cerr); }
