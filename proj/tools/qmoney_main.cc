#include <iostream>

#include "qmoney/cli.h"

int main(int argc, char** argv) { return qmoney::cli::run(argc, argv, std::cout, std::cerr); }
