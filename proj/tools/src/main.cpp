#include <iostream>

#include "might_cli/cli.hpp"

int main(int argc, char** argv) {
    return might::cli::run(argc, argv, std::cout, std::cerr);
}
