#include "kinktrap/cli.hpp"

int main(int argc, char** argv)
{
    return kinktrap::cli::main(argc, argv);
}
