#include "spectral/cli.hpp"

int main(int argc, char** argv) { return spectral::cli::run(argc, argv); }
