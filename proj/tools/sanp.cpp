#include "sanp/cli.hpp"

int main(int argc, char** argv) { return sanp::cli::run(argc, argv); }
