#include <iostream>

#include "biasforge/cli.hpp"

int main(int argc, char** argv) {
    return biasforge::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
