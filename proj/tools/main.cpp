#include "vlac/cli.hpp"

int main(int argc, char** argv) { return vlac::cli::run(argc, argv); }
