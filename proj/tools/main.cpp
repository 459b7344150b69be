#include "repump/cli.hpp"

int main(int argc, char** argv) { return repump::run_cli(argc, argv); }
