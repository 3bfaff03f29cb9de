#include <iostream>

#include "nordenkit/cli.hpp"

int main(int argc, char** argv) {
    return nk::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
