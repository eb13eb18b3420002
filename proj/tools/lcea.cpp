#include "lcea/cli.hpp"

int main(int argc, char** argv) { return lcea::cli_main(argc, argv); }
