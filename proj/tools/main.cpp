#include "cli.hpp"

int main(int argc, char** argv) { return asyncsys::cli::run_cli(argc, argv, std::cout, std::cerr); }
