#include <iostream>

#include "maxspec/cli.hpp"

int main(int argc, char** argv) { return maxspec::run(argc, argv, std::cout, std::cerr); }
