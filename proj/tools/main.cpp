#include "riemip/cli.hpp"

int main(int argc, char** argv) { return riemip::cli_run(argc, argv); }
