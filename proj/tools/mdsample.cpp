#include "mdsample/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return mdsample::runCli(argc, argv, std::cout, std::cerr);
}
