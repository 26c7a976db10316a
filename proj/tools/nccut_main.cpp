#include <iostream>

#include "nccut/cli.hpp"

int main(int argc, char** argv)
{
    return nccut::run_cli(argc, argv, std::cout, std::cerr);
}
