#include "rotns/cli.hpp"

int main(int argc, char** argv) { return rotns::run_command(argc, argv); }
