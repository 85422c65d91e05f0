#include <iostream>

#include "rgl/cli.hpp"

int main(int argc, char** argv) { return rgl::cli::run(argc, argv, std::cout, std::cerr); }
