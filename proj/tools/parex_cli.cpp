#include "parex/harness.hpp"

int main(int argc, char** argv) { return parex::cli_main(argc, argv); }
