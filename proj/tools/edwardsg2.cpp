#include <iostream>
#include <string>
#include <vector>

#include "edwardsg2/cli.hpp"

int main(int argc, char** argv) {
    return edwardsg2::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
