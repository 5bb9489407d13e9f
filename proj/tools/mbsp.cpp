#include "mbsp/cli.hpp"

int main(int argc, char** argv)
{
    return mbsp::cli::run(argc, argv);
}
