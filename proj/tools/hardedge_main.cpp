#include "hardedge/cli.hpp"

int main(int argc, char** argv) { return hardedge::cli::run(argc, argv); }
