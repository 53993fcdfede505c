#include "kfks/cli.hpp"

int main(int argc, char** argv) { return kfks::run_cli(argc, argv); }
