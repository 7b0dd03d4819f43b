#include "hotstream/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return hotstream::cli_main(argc, argv, std::cout, std::cerr);
}
