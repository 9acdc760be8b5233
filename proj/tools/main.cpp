#include "cli.hpp"

int main(int argc, char** argv) { return primecvp::cli::cli_main(argc, argv); }
