#include "mvset/cli.hpp"

int main(int argc, char** argv) { return mvset::run_cli(argc, argv); }
