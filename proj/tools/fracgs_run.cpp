#include "fracgs/cli.hpp"

int main(int argc, char** argv) { return fracgs::cli::main_entry(argc, argv); }
