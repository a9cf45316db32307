#include "tokeval/cli.hpp"

int main(int argc, char** argv) { return tokeval::run_cli(argc, argv); }
