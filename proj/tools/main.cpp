#include "cantor/cli.hpp"

int main(int argc, char** argv) { return cantor::run_command(argc, argv); }
