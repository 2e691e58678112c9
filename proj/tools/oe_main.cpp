#include <iostream>
#include <string>
#include <vector>

#include "oe/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return oe::cli::run(args, std::cout, std::cerr);
}
