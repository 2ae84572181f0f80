#include "ratingmc/cli.hpp"

int main(int argc, char** argv) { return ratingmc::cli::run(argc, argv); }
