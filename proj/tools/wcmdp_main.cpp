#include <iostream>

#include "wcmdp/cli.hpp"

int main(int argc, char** argv) { return wcmdp::run_cli(argc, argv, std::cout, std::cerr); }
