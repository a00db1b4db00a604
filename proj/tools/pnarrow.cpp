#include <iostream>
#include <string>
#include <vector>

#include "pnarrow/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pnarrow::cli::run(args, std::cout, std::cerr);
}
