#include "evonas/cli.hpp"

int main(int argc, char** argv) { return evonas::run_cli(argc, argv); }
