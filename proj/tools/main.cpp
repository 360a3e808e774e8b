#include "astroturf/cli.hpp"

int main(int argc, char** argv) { return astroturf::cli::run(argc, argv); }
