#include "stabledn/cli.hpp"

int main(int argc, char** argv) { return stabledn::cli_main(argc, argv); }
