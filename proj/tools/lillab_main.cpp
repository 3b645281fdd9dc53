#include "lillab/cli/run.hpp"

int main(int argc, char** argv) { return lillab::cli::run(argc, argv); }
