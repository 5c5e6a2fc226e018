#include <iostream>
#include <string>
#include <vector>

#include "coda/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return coda::cli::run(args, std::cout, std::cerr);
}
