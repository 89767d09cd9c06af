#include <iostream>

#include "radsing/cli.hpp"

int main(int argc, char** argv) { return radsing::cli::run(argc, argv, std::cout, std::cerr); }
