#include <iostream>

#include "softcap/cli.hpp"

int main(int argc, char** argv) { return softcap::run_cli(argc, argv, std::cout, std::cerr); }
