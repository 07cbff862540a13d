#include "graphct/cli.hpp"

int main(int argc, char** argv) { return graphct::run_cli(argc, argv); }
