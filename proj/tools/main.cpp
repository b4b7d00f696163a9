#include "cli.hpp"

int main(int argc, char** argv) { return titchlab::cli::main_entry(argc, argv); }
