#include <iostream>

#include "implicert/cli.hpp"

int main(int argc, char** argv) { return implicert::run_cli(argc, argv, std::cout, std::cerr); }
