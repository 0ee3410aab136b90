#include <iostream>

#include "lps/cli.hpp"

int main(int argc, char** argv) { return lps::cli::run(argc, argv, std::cout, std::cerr); }
