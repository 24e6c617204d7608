#include "weyl_lab/cli/run.hpp"

int main(int argc, char** argv) { return weyl_lab::cli::main_entry(argc, argv); }
