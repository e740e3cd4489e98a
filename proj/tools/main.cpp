#include <iostream>

#include "oddterw/cli.hpp"

int main(int argc, char** argv) { return oddterw::cli::run(argc, argv, std::cout, std::cerr); }
