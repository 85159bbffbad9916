#include "coopsig/cli.h"

int main(int argc, char** argv) { return coopsig::run_cli(argc, argv); }
