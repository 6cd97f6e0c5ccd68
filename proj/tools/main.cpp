#include "rlu/cli.hpp"

int main(int argc, char** argv) { return rlu::cli::run_cli(argc, argv); }
