#include "randers/cli.hpp"

int main(int argc, char** argv) { return randers::cli::run(argc, argv); }
