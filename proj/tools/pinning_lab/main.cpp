#include <iostream>
#include <string>
#include <vector>

#include "pinning_lab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return pinning::cli::run(args, std::cout, std::cerr);
}
