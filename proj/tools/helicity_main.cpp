#include "helicity/cli.hpp"

int main(int argc, char** argv) { return helicity::cli::run(argc, argv); }
