#include "l1spline/cli.hpp"

int main(int argc, char** argv) { return l1spline::cli::run_command_line(argc, argv); }
