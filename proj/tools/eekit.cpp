#include "eekit/cli.hpp"

int main(int argc, char** argv) { return eekit::cli_main(argc, argv); }
