#include <iostream>

#include "dcsplit/commands.h"

int main(int argc, char** argv) { return dcsplit::run_cli(argc, argv, std::cout, std::cerr); }
