#include <iostream>

#include "qchar/cli.hpp"

int main(int argc, char** argv) { return qchar::cli::run(argc, argv, std::cout, std::cerr); }
