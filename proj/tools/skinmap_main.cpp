#include <iostream>

#include "skinmap/cli.hpp"

int main(int argc, char** argv) { return skinmap::cli::run(argc, argv, std::cout, std::cerr); }
