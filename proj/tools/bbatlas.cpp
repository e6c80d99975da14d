#include <iostream>
#include <string>
#include <vector>

#include "bbatlas/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return bbatlas::run(std::move(args), std::cout, std::cerr);
}
