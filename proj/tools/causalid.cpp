#include "causalid/cli.hpp"

int main(int argc, char** argv) { return causalid::cli::run(argc, argv); }
