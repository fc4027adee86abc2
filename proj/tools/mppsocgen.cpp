#include <iostream>

#include "mppsoc/cli.hpp"

int main(int argc, char** argv)
{
    return mppsoc::cli::run(argc, argv, std::cout, std::cerr);
}
