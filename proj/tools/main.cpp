#include "g2r/cli.hpp"

int main(int argc, char** argv) { return g2r::run_cli(argc, argv); }
