#include "coopemit/tools/runner.hpp"

int main(int argc, char** argv) { return coopemit::tools::run_cli(argc, argv); }
