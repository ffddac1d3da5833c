#include "srclab/cli.hpp"

int main(int argc, char** argv) { return srclab::cli_main(argc, argv); }
