#include "cli.hpp"

int main(int argc, char** argv) { return hypwave::cli::run(argc, argv); }
