#include <iostream>
#include <string>
#include <vector>

#include "tempres/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return tempres::run_cli(args, std::cout, std::cerr);
}
