#include "spectral_gamma/cli.hpp"

int main(int argc, char** argv) { return sgamma::run_cli(argc, argv); }
