#include <iostream>

#include <bigraph/cli.hpp>

int main(int argc, char** argv)
{
    return bigraph::run_cli(argc, argv, std::cout, std::cerr);
}
