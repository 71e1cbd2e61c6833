#include "cusp/cli.hpp"

int main(int argc, char** argv) { return cusp::cli::main_entry(argc, argv); }
