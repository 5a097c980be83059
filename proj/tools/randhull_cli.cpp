#include <iostream>

#include "randhull/cli/cli.hpp"

int main(int argc, char** argv) {
    return randhull::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
