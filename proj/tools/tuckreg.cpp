#include <iostream>

#include "tuckreg/cli.hpp"

int main(int argc, char** argv) { return tuckreg::cli_main(argc, argv, std::cout, std::cerr); }
