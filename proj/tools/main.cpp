#include "cli.hpp"

int main(int argc, char** argv) { return arcszego::cli::run(argc, argv); }
