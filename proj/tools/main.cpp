#include <iostream>
#include <string>
#include <vector>

#include "ahspec/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ahspec::run(args, std::cout, std::cerr);
}
