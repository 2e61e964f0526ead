#include "spgsim/cli.hpp"

int main(int argc, char** argv) { return spgsim::cli_main(argc, argv); }
