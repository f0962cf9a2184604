#include "cli.hpp"

int main(int argc, char** argv) { return gl3::cli::main_entry(argc, argv); }
