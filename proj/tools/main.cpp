#include <iostream>
#include <string>
#include <vector>

#include "cmbr/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cmbr::run_cli(args, std::cout, std::cerr);
}
