#include "stefan1d/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return stefan1d::cli::run(argc, argv, std::cout, std::cerr);
}
