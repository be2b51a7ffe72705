#include <lexcontrast/cli.hpp>

int main(int argc, char** argv) { return lexcontrast::cli::run_subcommand(argc, argv); }
