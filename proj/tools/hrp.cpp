#include "hrp/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return hrp::cli::run(argc, argv, std::cout, std::cerr);
}
