#include "wigner/cli.hpp"

int main(int argc, char** argv) { return wigner::run_cli(argc, argv); }
