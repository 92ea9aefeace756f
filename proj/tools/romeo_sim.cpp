#include <iostream>

#include "romeo/cli.hpp"

int main(int argc, char** argv) {
    return romeo::cli::run_main(argc, argv, std::cout, std::cerr);
}
