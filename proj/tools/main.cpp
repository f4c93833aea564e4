#include <iostream>

#include "homsphere/commands.hpp"

int main(int argc, char** argv) { return homsphere::run_cli(argc, argv, std::cout, std::cerr); }
