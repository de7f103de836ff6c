#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return bubblegap::cli::run_cli(argc, argv, std::cout, std::cerr); }
