#include "zsph/cli.hpp"

int main(int argc, char** argv) { return zsph::run_cli(argc, argv); }
