#include <iostream>
#include <string>
#include <vector>

#include "scp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return scp::cli::run(args, std::cout, std::cerr);
}
