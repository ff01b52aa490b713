#include <iostream>

#include "welltris/cli.hpp"

int main(int argc, char** argv) { return welltris::cli::run(argc, argv, std::cout, std::cerr); }
