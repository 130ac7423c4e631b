#include "foliage/cli.hpp"

int main(int argc, char** argv)
{
    return foliage::cli::main(argc, argv);
}
