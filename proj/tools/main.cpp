#include <iostream>

#include "thinplate/cli/app.hpp"

int main(int argc, char** argv) { return thinplate::cli::run(argc, argv, std::cout, std::cerr); }
