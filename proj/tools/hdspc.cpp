#include <iostream>
#include <string>
#include <vector>

#include "hdspc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return hdspc::cli::run(args, std::cout, std::cerr);
}
