#include "vscbeat/io/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return vscbeat::io::run_cli(argc, argv, std::cout, std::cerr);
}
