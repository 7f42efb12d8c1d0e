#include "dispersal/commands.hpp"

int main(int argc, char** argv) { return dispersal::run_cli(argc, argv); }
