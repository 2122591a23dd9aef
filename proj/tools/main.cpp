#include "wgeom/cli.hpp"

int main(int argc, char** argv) { return wgeom::cli::run(argc, argv); }
