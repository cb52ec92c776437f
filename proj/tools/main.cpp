#include <iostream>

#include "reallog/cli.hpp"

int main(int argc, char** argv) { return reallog::cli::run(argc, argv, std::cout, std::cerr); }
