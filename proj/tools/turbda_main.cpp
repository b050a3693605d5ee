#include "turbda/cli.hpp"

int main(int argc, char** argv) { return turbda::run_cli(argc, argv); }
