#include "dstsp/cli.hpp"

int main(int argc, char** argv) { return dstsp::cli::main(argc, argv); }
