#include "dowker/cli.hpp"

int main(int argc, char** argv) { return dowker::cli_dispatch(argc, argv); }
