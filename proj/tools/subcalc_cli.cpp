#include <iostream>
#include <string>
#include <vector>

#include "subcalc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return subcalc::run_cli(args, std::cerr);
}
