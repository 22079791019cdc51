#include "cfrp/cli.hpp"

int main(int argc, char** argv) { return cfrp::cli::run(argc, argv); }
