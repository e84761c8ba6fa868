#include <iostream>

#include "cvqnd/cli.hpp"

int main(int argc, char** argv) {
    return cvqnd::cli::run(argc, argv, std::cout, std::cerr);
}
