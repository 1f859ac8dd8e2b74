#include <iostream>

#include "indicial/report.hpp"

int main(int argc, char** argv) { return indicial::run_cli(argc, argv, std::cout, std::cerr); }
