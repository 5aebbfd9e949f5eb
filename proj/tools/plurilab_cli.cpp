#include "plurilab/cli.hpp"

int main(int argc, char** argv) { return plurilab::cli::run(argc, argv); }
